#pragma once
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gengeo/epsilon_grid.hpp"
#include "gengeo/errors.hpp"
#include "gengeo/expr.hpp"

namespace gengeo {

// Mollifier profile rho on (-1,1): normalized to unit integral at
// construction, C^2 at minimum so that delta2 exists, identically zero
// outside the open interval. Built-in shapes:
//   bump         C-infinity bump exp(-1/(1-s^2)), nonnegative
//   gauss        truncated gaussian, cubed at the cut so the extension by
//                zero is exactly C^2 there (and no smoother)
//   signed-split two bump lobes with weights +2 and -1: integral 1 but
//                |integral| 3 and genuinely negative values, the standard
//                counterexample net for microstructure-dependent results
//   custom       any expression in one variable on (-1,1)
class DeltaProfile {
public:
    static DeltaProfile bump();
    static DeltaProfile gaussian_truncated();
    static DeltaProfile signed_split();
    static DeltaProfile custom(const Expr& rho, const std::string& var,
                               const std::string& name = "custom");
    // Resolves "bump" / "gauss" / "signed-split", otherwise parses as an
    // expression in the variable `s`.
    static DeltaProfile named(const std::string& spec);

    double value(double s) const { return std::abs(s) < 1.0 ? v0_(s) : 0.0; }
    double d1(double s) const { return std::abs(s) < 1.0 ? v1_(s) : 0.0; }
    double d2(double s) const { return std::abs(s) < 1.0 ? v2_(s) : 0.0; }

    double l1_norm() const { return l1_; }
    const std::string& name() const { return name_; }

private:
    DeltaProfile() = default;
    void normalize();  // divides by the computed integral, records L1 norm

    std::function<double(double)> v0_, v1_, v2_;
    double l1_ = 0.0;
    std::string name_;
};

// A strict delta net: delta_eps(x) = rho(x / r(eps)) / r(eps) with a radius
// rule r given as an expression in eps (default "eps"). First and second
// derivatives pick up 1/r^2 and 1/r^3.
class DeltaNet {
public:
    DeltaNet() : DeltaNet(DeltaProfile::bump()) {}
    explicit DeltaNet(DeltaProfile profile, const std::string& radius_rule = "eps");

    double radius(double eps) const;
    // order 0,1,2 -> delta, delta', delta''
    double evaluate(int order, double x, double eps) const;

    const DeltaProfile& profile() const { return profile_; }
    const std::string& radius_rule_text() const { return radius_text_; }

private:
    DeltaProfile profile_;
    Expr radius_rule_;
    std::string radius_text_;
};

struct StrictDeltaRow {
    double eps;
    double integral;   // of delta_eps over its support
    double radius;
    double l1;         // of |delta_eps|
};

struct StrictDeltaReport {
    std::vector<StrictDeltaRow> rows;
    bool integral_ok;      // every integral within 1e-8 of 1
    bool radius_shrinks;   // nonincreasing along the grid and at least halved
    bool l1_bounded;       // all finite; bound reported below
    double l1_bound;
    bool pass() const { return integral_ok && radius_shrinks && l1_bounded; }
};

StrictDeltaReport validate_strict_delta_net(const DeltaNet& net, const EpsilonGrid& grid);

} // namespace gengeo
