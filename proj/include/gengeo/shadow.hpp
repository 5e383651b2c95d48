#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gengeo/asymptotics.hpp"
#include "gengeo/geodesic.hpp"

namespace gengeo {

// A compactly supported smooth density in one variable. Evaluation is hard
// zero outside the declared support; `boundary_mismatch` records how far the
// raw expression is from zero at the support boundary (a discontinuous
// truncation degrades pairing accuracy and shows up here).
class TestDensity {
public:
    TestDensity(Expr expr, std::string var, double lo, double hi);

    static TestDensity parse(const std::string& text, const std::string& var, double lo,
                             double hi) {
        return TestDensity(parse_expr(text), var, lo, hi);
    }

    double operator()(double t) const;
    double derivative_at(double t) const;
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double boundary_mismatch() const { return boundary_mismatch_; }
    const Expr& expr() const { return expr_; }

private:
    Expr expr_;
    Expr dexpr_;
    std::string var_;
    double lo_, hi_;
    double boundary_mismatch_ = 0.0;
};

// Distributional pairing at fixed eps: integral of u_eps * phi over the
// support, with forced quadrature panel boundaries at the mollifier support
// edges when the field references a delta net.
double pair_density(const FieldNet& field, const TestDensity& phi, double eps);

struct ShadowEstimate {
    double limit = 0.0;
    double fitted_order = 0.0;  // p in |I(eps) - limit| ~ C eps^p
    std::vector<std::pair<double, double>> samples;
    bool trustworthy = false;
    double fit_residual = 0.0;  // rms residual of the log-log order fit
};

// Extrapolates eps -> 0 by least squares of value = L + C eps^p over the
// tail of the samples (p constrained to [0.25, 4]).
ShadowEstimate estimate_shadow(const std::vector<std::pair<double, double>>& samples);

struct KAssociationOrderRow {
    std::vector<int> orders;  // multi-index
    std::vector<std::pair<double, double>> sup_per_eps;
    bool pass = false;
};

struct KAssociationReport {
    bool pass = false;
    std::vector<KAssociationOrderRow> rows;
};

// Uniform convergence of u_eps - f together with coordinate partials up to
// order k (<= 2). Passing means every order's sup tends to zero
// monotonically on the grid tail.
KAssociationReport k_association_check(const FieldNet& field, const Expr& target, int k,
                                       const Region& region, const EpsilonGrid& grid);

struct GeodesicShadow {
    std::vector<double> t;
    // limit_curves[coord][i]: extrapolated value of coordinate `coord` at t[i]
    std::vector<std::vector<double>> limit_curves;
    std::vector<std::vector<double>> fitted_orders;
    std::vector<double> trustworthy_fraction;       // per coordinate
    std::vector<double> max_deviation;              // vs closed form, per coordinate
    bool flagged = false;  // >10% of grid points had untrustworthy fits
};

// Pointwise eps->0 extrapolation of a geodesic family, with optional
// comparison against closed-form limit curves (expressions in t using the
// reference-only heaviside/pos symbols). Points with |t| < exclusion_radius
// are excluded from the comparison: pointwise convergence fails at the jump
// itself.
GeodesicShadow geodesic_shadow(const GeodesicFamily& family,
                               const std::vector<std::optional<Expr>>& closed_forms,
                               const std::string& t_var, double exclusion_radius);

} // namespace gengeo
