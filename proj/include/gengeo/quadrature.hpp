#pragma once
#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gengeo/errors.hpp"

namespace gengeo {

// Adaptive Gauss-Kronrod (15-point) on [a,b], optionally with forced panel
// boundaries. Integrands with a mollifier inside need the panel split at the
// support edges: the adaptive scheme alone can hide an O(eps)-wide spike.
template <class F>
double integrate(F&& f, double a, double b, std::vector<double> breakpoints = {},
                 double abs_tol = 1e-11) {
    if (!(a < b)) return 0.0;
    breakpoints.push_back(a);
    breakpoints.push_back(b);
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double lo = std::max(a, breakpoints[i]);
        const double hi = std::min(b, breakpoints[i + 1]);
        if (!(lo < hi)) continue;
        double err = 0.0;
        const double v = GK::integrate(f, lo, hi, 15, abs_tol, &err);
        if (!std::isfinite(v))
            throw NumericalError("quadrature produced a non-finite value");
        if (err > std::max(abs_tol * 100.0, 1e-8 * (1.0 + std::abs(v))))
            throw NumericalError("quadrature failed to converge on panel");
        total += v;
    }
    return total;
}

} // namespace gengeo
