#pragma once
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gengeo/asymptotics.hpp"
#include "gengeo/delta_net.hpp"
#include "gengeo/expr.hpp"

namespace gengeo {

struct MetricEvaluation {
    std::vector<double> point;
    double eps = 0.0;
    std::vector<double> matrix;       // row-major d x d, symmetrized
    double det = 0.0;
    std::vector<double> eigenvalues;  // sorted descending

    double at(int i, int j, int dim) const { return matrix[i * dim + j]; }
};

struct IndexReport {
    int index = -1;
    bool stable = false;
    // per tail-eps: (eps, min negative count, max negative count over the lattice)
    std::vector<std::tuple<double, int, int>> per_eps_signatures;
    std::vector<std::pair<double, double>> min_abs_eigenvalue_table;  // (eps, min |lambda|)
    // When unstable: the two witnessing evaluations.
    std::optional<std::pair<MetricEvaluation, MetricEvaluation>> witnesses;
};

// A symmetric matrix of field expressions over a single global chart: the
// eps-parametrized family g_eps,ij(x). Mirrored slots share the same
// expression object, so symmetry is structural rather than numeric.
class GeneralizedMetric {
public:
    GeneralizedMetric() = default;

    // Texts: full symmetric matrix, or upper triangle with empty strings
    // below the diagonal. Empty/missing entries in the upper triangle mean 0.
    static GeneralizedMetric build(std::vector<std::string> coordinates,
                                   const std::vector<std::vector<std::string>>& component_texts,
                                   std::map<std::string, double> parameters = {},
                                   std::shared_ptr<const DeltaNet> delta = nullptr,
                                   std::string label = {});

    // Same, from already-parsed expressions (upper triangle read, mirrored).
    static GeneralizedMetric from_exprs(std::vector<std::string> coordinates,
                                        const std::vector<std::vector<Expr>>& components,
                                        std::map<std::string, double> parameters = {},
                                        std::shared_ptr<const DeltaNet> delta = nullptr,
                                        std::string label = {});

    int dim() const { return dim_; }
    const std::vector<std::string>& coordinates() const { return coords_; }
    const Expr& component(int i, int j) const { return comp_[i * dim_ + j]; }
    const std::map<std::string, double>& parameters() const { return params_; }
    std::shared_ptr<const DeltaNet> delta() const { return delta_; }
    const std::string& label() const { return label_; }
    bool references_delta() const;

    Bindings make_bindings(std::span<const double> point, double eps) const;

    MetricEvaluation evaluate(std::span<const double> point, double eps) const;

    // The determinant as a field net (eps, p) -> det g_eps(p).
    FieldNet det_net() const;

    // Nondegeneracy = uniform invertibility of the determinant net.
    InvertibilityReport check_nondegenerate(const Region& region, const EpsilonGrid& grid) const;

    // Counts negative eigenvalues over (tail eps) x (lattice); stable iff the
    // signature is identical everywhere.
    IndexReport compute_index(const Region& region, const EpsilonGrid& grid) const;

    // Pointwise inverse via the cofactor formula (not a generic solver).
    // Throws NumericalError when |det| underflows.
    std::vector<double> inverse_at(std::span<const double> point, double eps) const;

    // Symbolic determinant and inverse (cofactor/det expressions); the
    // inverse shares mirrored slots like the metric itself.
    Expr det_expr() const;
    const std::vector<Expr>& inverse_exprs() const;

    // New metric with components g_ij + perturbation_ij (symmetric input).
    GeneralizedMetric perturbed(const std::vector<std::vector<Expr>>& perturbation,
                                const std::string& label_suffix) const;

private:
    void finalize();

    int dim_ = 0;
    std::vector<std::string> coords_;
    std::vector<Expr> comp_;  // row-major, symmetric shared
    std::map<std::string, double> params_;
    std::shared_ptr<const DeltaNet> delta_;
    std::string label_;
    mutable std::shared_ptr<const std::vector<Expr>> inverse_cache_;
    mutable std::shared_ptr<const Expr> det_cache_;
};

// Symbolic determinant of a square matrix of expressions (Laplace expansion;
// fine for the dimensions this library admits).
Expr symbolic_det(const std::vector<Expr>& m, int dim);

} // namespace gengeo
