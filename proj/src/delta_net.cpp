#include "gengeo/delta_net.hpp"

#include <cmath>

#include "gengeo/quadrature.hpp"

namespace gengeo {

namespace {

// Unnormalized C-infinity bump and its first two derivatives on (-1,1).
double beta(double t) {
    const double w = 1.0 - t * t;
    return w > 0.0 ? std::exp(-1.0 / w) : 0.0;
}

double beta1(double t) {
    const double w = 1.0 - t * t;
    if (w <= 0.0) return 0.0;
    return beta(t) * (-2.0 * t / (w * w));
}

double beta2(double t) {
    const double w = 1.0 - t * t;
    if (w <= 0.0) return 0.0;
    const double w2 = w * w;
    return beta(t) * (4.0 * t * t / (w2 * w2) - 2.0 / w2 - 8.0 * t * t / (w2 * w));
}

} // namespace

void DeltaProfile::normalize() {
    auto f = v0_;
    const double integral = integrate([&](double s) { return f(s); }, -1.0, 1.0, {0.0}, 1e-13);
    if (!(std::abs(integral) > 1e-12))
        throw ConfigError("delta profile has (near-)zero integral; cannot normalize");
    const double c = 1.0 / integral;
    auto w0 = v0_, w1 = v1_, w2 = v2_;
    v0_ = [w0, c](double s) { return c * w0(s); };
    v1_ = [w1, c](double s) { return c * w1(s); };
    v2_ = [w2, c](double s) { return c * w2(s); };
    // Contract check: renormalized integral within 1e-10 relative.
    const double check = integrate([this](double s) { return v0_(s); }, -1.0, 1.0, {0.0}, 1e-13);
    if (std::abs(check - 1.0) > 1e-10)
        throw NumericalError("delta profile normalization failed its own check");
    l1_ = integrate([this](double s) { return std::abs(v0_(s)); }, -1.0, 1.0,
                    {-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75}, 1e-12);
}

DeltaProfile DeltaProfile::bump() {
    DeltaProfile p;
    p.name_ = "bump";
    p.v0_ = [](double s) { return beta(s); };
    p.v1_ = [](double s) { return beta1(s); };
    p.v2_ = [](double s) { return beta2(s); };
    p.normalize();
    return p;
}

DeltaProfile DeltaProfile::gaussian_truncated() {
    // h(s) = exp(-s^2) - exp(-1) has a simple zero at the cut; h^3 makes the
    // extension by zero C^2 there and no smoother.
    DeltaProfile p;
    p.name_ = "gauss";
    auto h = [](double s) { return std::exp(-s * s) - std::exp(-1.0); };
    auto h1 = [](double s) { return -2.0 * s * std::exp(-s * s); };
    auto h2 = [](double s) { return (4.0 * s * s - 2.0) * std::exp(-s * s); };
    p.v0_ = [h](double s) {
        const double v = h(s);
        return v * v * v;
    };
    p.v1_ = [h, h1](double s) {
        const double v = h(s);
        return 3.0 * v * v * h1(s);
    };
    p.v2_ = [h, h1, h2](double s) {
        const double v = h(s), d = h1(s);
        return 6.0 * v * d * d + 3.0 * v * v * h2(s);
    };
    p.normalize();
    return p;
}

DeltaProfile DeltaProfile::signed_split() {
    // rho = 2*L1 - L2 with unit-mass lobes L1 on (-3/4,-1/4), L2 on (1/4,3/4).
    // Integral 1, |integral| 3; the negative lobe makes x^2 + delta_eps(x)
    // change sign for small eps.
    const double i_beta = integrate([](double s) { return beta(s); }, -1.0, 1.0, {0.0}, 1e-13);
    const double c = 4.0 / i_beta;  // each lobe 4*beta(4s -+ 2)/i_beta has integral 1
    DeltaProfile p;
    p.name_ = "signed-split";
    p.v0_ = [c](double s) { return c * (2.0 * beta(4.0 * s + 2.0) - beta(4.0 * s - 2.0)); };
    p.v1_ = [c](double s) {
        return 4.0 * c * (2.0 * beta1(4.0 * s + 2.0) - beta1(4.0 * s - 2.0));
    };
    p.v2_ = [c](double s) {
        return 16.0 * c * (2.0 * beta2(4.0 * s + 2.0) - beta2(4.0 * s - 2.0));
    };
    p.normalize();
    return p;
}

DeltaProfile DeltaProfile::custom(const Expr& rho, const std::string& var,
                                  const std::string& name) {
    if (rho.references_singular())
        throw ConfigError("custom delta profile must be an ordinary smooth expression");
    DeltaProfile p;
    p.name_ = name;
    const Expr d1 = rho.differentiate(var);
    const Expr d2 = d1.differentiate(var);
    auto eval = [var](const Expr& e, double s) {
        Bindings b;
        b.set(var, s);
        return e.evaluate(b);
    };
    p.v0_ = [rho, eval](double s) { return eval(rho, s); };
    p.v1_ = [d1, eval](double s) { return eval(d1, s); };
    p.v2_ = [d2, eval](double s) { return eval(d2, s); };
    p.normalize();
    return p;
}

DeltaProfile DeltaProfile::named(const std::string& spec) {
    if (spec.empty() || spec == "bump") return bump();
    if (spec == "gauss" || spec == "gaussian" || spec == "gaussian-truncated")
        return gaussian_truncated();
    if (spec == "signed" || spec == "signed-split") return signed_split();
    return custom(parse_expr(spec), "s", spec);
}

DeltaNet::DeltaNet(DeltaProfile profile, const std::string& radius_rule)
    : profile_(std::move(profile)), radius_text_(radius_rule) {
    radius_rule_ = parse_expr(radius_rule);
    auto vars = radius_rule_.free_variables();
    if (!vars.empty())
        throw ConfigError("delta radius rule may only reference eps");
    if (radius_rule_.references_singular())
        throw ConfigError("delta radius rule cannot contain singular symbols");
}

double DeltaNet::radius(double eps) const {
    Bindings b;
    b.eps = eps;
    const double r = radius_rule_.evaluate(b);
    if (!(r > 0.0)) throw EvalError("delta radius rule produced a non-positive radius");
    return r;
}

double DeltaNet::evaluate(int order, double x, double eps) const {
    const double r = radius(eps);
    if (std::abs(x) >= r) return 0.0;
    const double s = x / r;
    switch (order) {
        case 0: return profile_.value(s) / r;
        case 1: return profile_.d1(s) / (r * r);
        case 2: return profile_.d2(s) / (r * r * r);
        default: throw ConfigError("delta derivative order beyond 2");
    }
}

StrictDeltaReport validate_strict_delta_net(const DeltaNet& net, const EpsilonGrid& grid) {
    StrictDeltaReport rep;
    rep.integral_ok = true;
    rep.l1_bounded = true;
    rep.l1_bound = 0.0;
    for (double eps : grid.values()) {
        StrictDeltaRow row;
        row.eps = eps;
        row.radius = net.radius(eps);
        const double r = row.radius;
        row.integral = integrate([&](double x) { return net.evaluate(0, x, eps); }, -r, r,
                                 {-0.5 * r, 0.0, 0.5 * r}, 1e-12);
        row.l1 = integrate([&](double x) { return std::abs(net.evaluate(0, x, eps)); }, -r, r,
                           {-0.75 * r, -0.5 * r, -0.25 * r, 0.0, 0.25 * r, 0.5 * r, 0.75 * r},
                           1e-12);
        if (std::abs(row.integral - 1.0) > 1e-8) rep.integral_ok = false;
        if (!std::isfinite(row.l1)) rep.l1_bounded = false;
        rep.l1_bound = std::max(rep.l1_bound, row.l1);
        rep.rows.push_back(row);
    }
    rep.radius_shrinks = true;
    for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i)
        if (rep.rows[i + 1].radius > rep.rows[i].radius * (1.0 + 1e-12))
            rep.radius_shrinks = false;
    if (!rep.rows.empty() &&
        !(rep.rows.back().radius <= 0.5 * rep.rows.front().radius))
        rep.radius_shrinks = false;
    return rep;
}

} // namespace gengeo
