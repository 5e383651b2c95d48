#include "gengeo/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace gengeo {

const char* to_string(GrowthVerdict v) {
    switch (v) {
        case GrowthVerdict::ModerateLike: return "moderate-like";
        case GrowthVerdict::NegligibleLike: return "negligible-like";
        case GrowthVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

void check_finite(double v, double eps, std::span<const double> point, const std::string& label) {
    if (std::isfinite(v)) return;
    std::ostringstream os;
    os << "net '" << label << "' returned a non-finite value at eps=" << eps;
    if (!point.empty()) {
        os << ", point=(";
        for (std::size_t i = 0; i < point.size(); ++i) os << (i ? "," : "") << point[i];
        os << ")";
    }
    throw EvalError(os.str());
}

// Least-squares slope of y against x plus rms residual.
struct LineFit {
    double slope = 0.0, intercept = 0.0, rms = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit f;
    const double denom = n * sxx - sx * sx;
    f.slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    return f;
}

// Values that underflow to zero are clamped for the log-log fit; the
// clamp value only matters for hopeless fits which come out inconclusive
// or strongly negligible either way.
constexpr double kLogFloor = 1e-300;

GrowthReport growth_from_sups(std::vector<std::pair<double, double>> sups,
                              std::size_t tail_start) {
    GrowthReport rep;
    rep.per_eps_sup = std::move(sups);

    std::vector<double> lx, ly;
    for (const auto& [eps, sup] : rep.per_eps_sup) {
        lx.push_back(std::log(eps));
        ly.push_back(std::log(std::max(sup, kLogFloor)));
    }
    const LineFit all = fit_line(lx, ly);
    rep.estimated_order = -all.slope;
    rep.fit_residual = all.rms;

    // Tail decay slope: positive when the net vanishes as eps -> 0.
    std::vector<double> tx(lx.begin() + tail_start, lx.end());
    std::vector<double> ty(ly.begin() + tail_start, ly.end());
    const LineFit tail = fit_line(tx, ty);
    rep.tail_decay_exponent = tail.slope;

    rep.negligible_order = 0;
    for (int m = kMaxExponent; m >= 1; --m) {
        if (rep.negligible_like(m)) {
            rep.negligible_order = m;
            break;
        }
    }

    if (rep.negligible_order >= 1)
        rep.verdict = GrowthVerdict::NegligibleLike;
    else if (rep.estimated_order <= kModerateOrderCap && rep.fit_residual <= kModerateResidualCap)
        rep.verdict = GrowthVerdict::ModerateLike;
    else
        rep.verdict = GrowthVerdict::Inconclusive;
    return rep;
}

} // namespace

GrowthReport estimate_growth_order(const ScalarNet& net, const EpsilonGrid& grid) {
    std::vector<std::pair<double, double>> sups;
    for (double eps : grid.values()) {
        const double v = net.sample(eps);
        check_finite(v, eps, {}, net.label);
        sups.emplace_back(eps, std::abs(v));
    }
    return growth_from_sups(std::move(sups), grid.tail_start());
}

GrowthReport estimate_growth_order(const FieldNet& net, const Region& region,
                                   const EpsilonGrid& grid) {
    if (region.dim() != net.dim())
        throw ConfigError("region dimension does not match field net");
    std::vector<std::pair<double, double>> sups;
    for (double eps : grid.values()) {
        double sup = 0.0;
        region.for_each_point([&](std::span<const double> p) {
            const double v = net.sample(eps, p);
            check_finite(v, eps, p, net.label());
            sup = std::max(sup, std::abs(v));
        });
        sups.emplace_back(eps, sup);
    }
    return growth_from_sups(std::move(sups), grid.tail_start());
}

StrictNonzeroResult is_strictly_nonzero(const ScalarNet& net, const EpsilonGrid& grid) {
    StrictNonzeroResult res;
    for (double eps : grid.tail()) {
        const double v = net.sample(eps);
        check_finite(v, eps, {}, net.label);
        res.tail_values.emplace_back(eps, std::abs(v));
    }
    for (int m = 0; m <= kMaxExponent; ++m) {
        bool ok = true;
        for (const auto& [eps, av] : res.tail_values) {
            if (!(av >= std::pow(eps, m))) {
                ok = false;
                break;
            }
        }
        if (ok) {
            res.decision = true;
            res.witness_exponent = m;
            return res;
        }
    }
    return res;  // decision=false, witness absent
}

InvertibilityReport check_invertible_on(const FieldNet& field, const Region& region,
                                        const EpsilonGrid& grid) {
    if (region.dim() != field.dim())
        throw ConfigError("region dimension does not match field net");
    InvertibilityReport rep;
    rep.label = field.label();

    for (double eps : grid.values()) {
        double inf = std::numeric_limits<double>::infinity();
        std::vector<double> argmin;
        region.for_each_point([&](std::span<const double> p) {
            const double v = field.sample(eps, p);
            check_finite(v, eps, p, field.label());
            const double av = std::abs(v);
            if (av < inf) {
                inf = av;
                argmin.assign(p.begin(), p.end());
            }
        });
        rep.inf_table.emplace_back(eps, inf);
        if (eps == grid.smallest()) rep.worst_point = argmin;
    }

    const std::size_t tail_start = grid.tail_start();
    for (int q = 0; q <= kMaxExponent; ++q) {
        bool ok = true;
        for (std::size_t i = tail_start; i < rep.inf_table.size(); ++i) {
            const auto& [eps, inf] = rep.inf_table[i];
            if (!(inf >= std::pow(eps, q))) {
                ok = false;
                break;
            }
        }
        if (ok) {
            rep.decision = true;
            rep.exponent = q;
            return rep;
        }
    }
    return rep;
}

} // namespace gengeo
