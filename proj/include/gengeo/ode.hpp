#pragma once
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <vector>

#include "gengeo/errors.hpp"

namespace gengeo {

struct OdeOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double h_max = std::numeric_limits<double>::infinity();
    double h_min = 1e-14;  // below this the problem is declared stiff
    long max_steps = 2'000'000;
    // Optional state-dependent step cap (impulse windows). Return +inf for
    // "no cap".
    std::function<double(double t, std::span<const double> y)> step_cap;
};

struct OdeStats {
    long steps = 0;
    long rejected = 0;
    double min_h = std::numeric_limits<double>::infinity();
    double max_h = 0.0;
};

// Embedded Dormand-Prince 5(4) with the standard 4th-order continuous
// extension. `sample_ts` must be increasing and inside [t0, t1]; the dense
// output is written to `out_samples` (one state per sample time).
class DormandPrince54 {
public:
    using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

    static OdeStats integrate(const Rhs& rhs, double t0, std::span<const double> y0, double t1,
                              const OdeOptions& opts, std::span<const double> sample_ts,
                              std::vector<std::vector<double>>& out_samples) {
        const std::size_t n = y0.size();
        if (!(t1 > t0)) throw ConfigError("ode: t1 must exceed t0");
        std::vector<double> y(y0.begin(), y0.end());
        std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
        std::vector<double> ytmp(n), ynew(n), yerr(n);
        std::vector<double> r1(n), r2(n), r3(n), r4(n), r5(n);

        out_samples.assign(sample_ts.size(), std::vector<double>(n, 0.0));
        std::size_t next_sample = 0;
        // Samples at exactly t0 are filled from the initial state.
        while (next_sample < sample_ts.size() && sample_ts[next_sample] <= t0) {
            out_samples[next_sample].assign(y.begin(), y.end());
            ++next_sample;
        }

        OdeStats stats;
        double t = t0;
        rhs(t, y, k1);
        double h = initial_step(t0, t1, opts, y);
        h = apply_caps(h, t, y, opts);

        while (t < t1) {
            if (stats.steps + stats.rejected > opts.max_steps)
                throw NumericalError("ode: step budget exhausted");
            h = std::min(h, t1 - t);
            h = apply_caps(h, t, y, opts);
            if (h < opts.h_min) {
                std::ostringstream os;
                os << "ode: step size underflow (h=" << h << ") at t=" << t
                   << "; the problem looks stiff here";
                throw NumericalError(os.str());
            }

            step(rhs, t, y, h, k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, yerr);

            double err = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double sc =
                    opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                const double e = yerr[i] / sc;
                err += e * e;
            }
            err = std::sqrt(err / n);

            for (double v : ynew)
                if (!std::isfinite(v)) {
                    std::ostringstream os;
                    os << "ode: state blew up near t=" << t;
                    throw NumericalError(os.str());
                }

            if (err <= 1.0) {
                dense_coefficients(y, ynew, h, k1, k3, k4, k5, k6, k7, r1, r2, r3, r4, r5);
                const double t_new = t + h;
                while (next_sample < sample_ts.size() && sample_ts[next_sample] <= t_new) {
                    const double theta = (sample_ts[next_sample] - t) / h;
                    interpolate(theta, r1, r2, r3, r4, r5, out_samples[next_sample]);
                    ++next_sample;
                }
                t = t_new;
                y = ynew;
                k1 = k7;  // FSAL
                ++stats.steps;
                stats.min_h = std::min(stats.min_h, h);
                stats.max_h = std::max(stats.max_h, h);
            } else {
                ++stats.rejected;
            }

            const double factor =
                std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
            h *= factor;
            h = std::min(h, opts.h_max);
        }

        // Fill any samples that coincide with t1 up to roundoff.
        while (next_sample < sample_ts.size() &&
               sample_ts[next_sample] <= t1 + 1e-12 * std::max(1.0, std::abs(t1))) {
            out_samples[next_sample].assign(y.begin(), y.end());
            ++next_sample;
        }
        if (next_sample != sample_ts.size())
            throw ConfigError("ode: sample times extend past t1");
        return stats;
    }

private:
    static double apply_caps(double h, double t, std::span<const double> y,
                             const OdeOptions& opts) {
        h = std::min(h, opts.h_max);
        if (opts.step_cap) h = std::min(h, opts.step_cap(t, y));
        return h;
    }

    static double initial_step(double t0, double t1, const OdeOptions& opts,
                               std::span<const double>) {
        return std::min(opts.h_max, (t1 - t0) / 100.0);
    }

    static void step(const Rhs& rhs, double t, const std::vector<double>& y, double h,
                     const std::vector<double>& k1, std::vector<double>& k2,
                     std::vector<double>& k3, std::vector<double>& k4, std::vector<double>& k5,
                     std::vector<double>& k6, std::vector<double>& k7, std::vector<double>& ytmp,
                     std::vector<double>& ynew, std::vector<double>& yerr) {
        const std::size_t n = y.size();
        // Dormand-Prince coefficients.
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] =
                y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] =
                y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, ynew, k7);
        for (std::size_t i = 0; i < n; ++i)
            yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                           e7 * k7[i]);
    }

    static void dense_coefficients(const std::vector<double>& y, const std::vector<double>& ynew,
                                   double h, const std::vector<double>& k1,
                                   const std::vector<double>& k3, const std::vector<double>& k4,
                                   const std::vector<double>& k5, const std::vector<double>& k6,
                                   const std::vector<double>& k7, std::vector<double>& r1,
                                   std::vector<double>& r2, std::vector<double>& r3,
                                   std::vector<double>& r4, std::vector<double>& r5) {
        static constexpr double d1 = -12715105075.0 / 11282082432.0;
        static constexpr double d3 = 87487479700.0 / 32700410799.0;
        static constexpr double d4 = -10690763975.0 / 1880347072.0;
        static constexpr double d5 = 701980252875.0 / 199316789632.0;
        static constexpr double d6 = -1453857185.0 / 822651844.0;
        static constexpr double d7 = 69997945.0 / 29380423.0;
        const std::size_t n = y.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double ydiff = ynew[i] - y[i];
            const double bspl = h * k1[i] - ydiff;
            r1[i] = y[i];
            r2[i] = ydiff;
            r3[i] = bspl;
            r4[i] = ydiff - h * k7[i] - bspl;
            r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                         d7 * k7[i]);
        }
    }

    static void interpolate(double theta, const std::vector<double>& r1,
                            const std::vector<double>& r2, const std::vector<double>& r3,
                            const std::vector<double>& r4, const std::vector<double>& r5,
                            std::vector<double>& out) {
        const double th1 = 1.0 - theta;
        for (std::size_t i = 0; i < r1.size(); ++i)
            out[i] = r1[i] + theta * (r2[i] + th1 * (r3[i] + theta * (r4[i] + th1 * r5[i])));
    }
};

} // namespace gengeo
