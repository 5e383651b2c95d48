#pragma once
#include <span>
#include <vector>

#include "gengeo/metric.hpp"

namespace gengeo {

// A vector field with expression components over the metric's coordinates.
struct VectorField {
    std::vector<Expr> comp;

    static VectorField coordinate(int dim, int direction) {
        VectorField v;
        v.comp.assign(dim, Expr::number(0.0));
        v.comp[direction] = Expr::number(1.0);
        return v;
    }
};

// Christoffel symbols of the Levi-Civita connection, built symbolically:
// the inverse metric enters through cofactor/det expressions and all
// coordinate derivatives are exact. Finite differences across a mollifier
// of width eps would be catastrophically ill-conditioned.
class ChristoffelField {
public:
    ChristoffelField() = default;

    int dim() const { return dim_; }
    const GeneralizedMetric& metric() const { return metric_; }
    // Index order [k][i][j]; mirrored (i,j) slots share the node.
    const Expr& symbol(int k, int i, int j) const { return sym_[(k * dim_ + i) * dim_ + j]; }

    double evaluate(int k, int i, int j, const Bindings& b) const {
        return symbol(k, i, j).evaluate(b);
    }

    // Indices (k,i,j) of symbols that are not the literal zero expression.
    const std::vector<std::array<int, 3>>& nonzero() const { return nonzero_; }

private:
    friend ChristoffelField christoffel(const GeneralizedMetric& m);
    int dim_ = 0;
    GeneralizedMetric metric_;
    std::vector<Expr> sym_;
    std::vector<std::array<int, 3>> nonzero_;
};

ChristoffelField christoffel(const GeneralizedMetric& m);

// Covariant derivative of xi in coordinate direction i:
// (D_i xi)^k = d xi^k / dx^i + Gamma^k_{ij} xi^j.
VectorField covariant_derivative(const ChristoffelField& gamma, const VectorField& xi,
                                 int direction);

struct KoszulResult {
    double max_residual = 0.0;  // max |lhs - rhs| over the points
    double scale = 0.0;         // max(|lhs|, |rhs|, 1) over the points
};

// Evaluates both sides of the Koszul identity
//   2 g(D_xi eta, zeta) = xi g(eta,zeta) + eta g(zeta,xi) - zeta g(xi,eta)
//                         - g(xi,[eta,zeta]) + g(eta,[zeta,xi]) + g(zeta,[xi,eta])
// at the given points (brackets and directional derivatives expanded
// symbolically) and reports the worst absolute difference.
KoszulResult koszul_residual(const ChristoffelField& gamma, const VectorField& xi,
                             const VectorField& eta, const VectorField& zeta,
                             const std::vector<std::vector<double>>& points, double eps);

// Induced covariant derivative along a sampled curve (uniform t-grid,
// >= 5 points): xi'^k = d xi^k/dt + Gamma^k_{ij} gamma'^i xi^j, with the
// t-derivative taken by 4th-order finite differences.
std::vector<std::vector<double>> along_curve_derivative(
    const ChristoffelField& gamma, std::span<const double> t_grid,
    const std::vector<std::vector<double>>& positions,
    const std::vector<std::vector<double>>& velocities,
    const std::vector<std::vector<double>>& xi_samples, double eps);

} // namespace gengeo
