#include "gengeo/geodesic.hpp"

#include <cmath>
#include <sstream>

namespace gengeo {

namespace {

// Step-size policy near impulses. Adaptive control alone can step across an
// O(eps)-wide mollifier window without ever sampling it; the cap is
// mandatory, not a tuning knob. For every delta argument a(x) in the metric
// we cap at radius/10 inside the window and at half the estimated time to
// reach the window outside it.
struct ImpulseCaps {
    struct Window {
        Expr arg;
        std::vector<Expr> grad;  // d arg / dx^i
    };
    std::vector<Window> windows;
    const GeneralizedMetric* metric = nullptr;

    static ImpulseCaps from_metric(const GeneralizedMetric& m) {
        ImpulseCaps caps;
        caps.metric = &m;
        for (int i = 0; i < m.dim(); ++i) {
            for (int j = i; j < m.dim(); ++j) {
                for (const Expr& arg : m.component(i, j).delta_arguments()) {
                    bool dup = false;
                    for (const auto& w : caps.windows)
                        if (w.arg.same_object(arg)) dup = true;
                    if (dup) continue;
                    Window w;
                    w.arg = arg;
                    for (const auto& c : m.coordinates()) w.grad.push_back(arg.differentiate(c));
                    caps.windows.push_back(std::move(w));
                }
            }
        }
        return caps;
    }

    bool empty() const { return windows.empty(); }

    double cap(double eps, std::span<const double> y) const {
        const int d = metric->dim();
        double h = std::numeric_limits<double>::infinity();
        const double r = metric->delta()->radius(eps);
        Bindings b = metric->make_bindings(std::vector<double>(y.begin(), y.begin() + d), eps);
        for (const auto& w : windows) {
            const double val = w.arg.evaluate(b);
            if (std::abs(val) <= r) {
                h = std::min(h, r / 10.0);
                continue;
            }
            double rate = 0.0;
            for (int i = 0; i < d; ++i) {
                if (w.grad[i].is_zero()) continue;
                rate += w.grad[i].evaluate(b) * y[d + i];
            }
            const double dist = std::abs(val) - r;
            const double eta = dist / std::max(std::abs(rate), 1e-12);
            h = std::min(h, std::max(r / 10.0, 0.5 * eta));
        }
        return h;
    }
};

// The embedded controller bounds the *local* error per step; running it a
// factor below the requested tolerance keeps the accumulated drift (and the
// dense-output error feeding the residual diagnostics) within `tol` over
// the whole trajectory.
constexpr double kControllerSafety = 1.0 / 20.0;

std::vector<double> uniform_grid(double t0, double t1, int n) {
    if (n < 2) throw ConfigError("trajectory needs at least 2 samples");
    std::vector<double> t(n);
    const double h = (t1 - t0) / (n - 1);
    for (int i = 0; i < n; ++i) t[i] = t0 + i * h;
    t.back() = t1;
    return t;
}

} // namespace

std::vector<double> geodesic_rhs(const ChristoffelField& gamma,
                                 std::span<const double> position,
                                 std::span<const double> velocity, double eps) {
    const int d = gamma.dim();
    Bindings b = gamma.metric().make_bindings(position, eps);
    std::vector<double> acc(d, 0.0);
    for (const auto& [k, i, j] : gamma.nonzero())
        acc[k] -= gamma.symbol(k, i, j).evaluate(b) * velocity[i] * velocity[j];
    return acc;
}

Trajectory integrate_geodesic(const ChristoffelField& gamma, const GeodesicInit& init,
                              double t_end, double eps, double tol, int n_samples) {
    const int d = gamma.dim();
    if (static_cast<int>(init.position.size()) != d ||
        static_cast<int>(init.velocity.size()) != d)
        throw ConfigError("geodesic init has wrong dimension");
    if (!(t_end > init.t0)) throw ConfigError("geodesic t_end must exceed t0");
    if (!(tol > 0.0)) throw ConfigError("geodesic tolerance must be positive");
    if (!(eps > 0.0) || eps > 1.0) throw ConfigError("eps must lie in (0,1]");

    ImpulseCaps caps = ImpulseCaps::from_metric(gamma.metric());

    std::vector<double> y0(2 * d);
    for (int i = 0; i < d; ++i) {
        y0[i] = init.position[i];
        y0[d + i] = init.velocity[i];
    }

    Bindings scratch = gamma.metric().make_bindings(init.position, eps);
    auto rhs = [&](double, std::span<const double> y, std::span<double> dydt) {
        scratch.assign_front(y.subspan(0, d));
        for (int i = 0; i < d; ++i) dydt[i] = y[d + i];
        for (int i = 0; i < d; ++i) dydt[d + i] = 0.0;
        for (const auto& [k, i, j] : gamma.nonzero())
            dydt[d + k] -= gamma.symbol(k, i, j).evaluate(scratch) * y[d + i] * y[d + j];
    };

    OdeOptions opts;
    opts.abs_tol = tol * kControllerSafety;
    opts.rel_tol = tol * kControllerSafety;
    opts.h_max = (t_end - init.t0) / 16.0;
    if (!caps.empty())
        opts.step_cap = [&caps, eps](double, std::span<const double> y) {
            return caps.cap(eps, y);
        };

    Trajectory traj;
    traj.eps = eps;
    traj.t = uniform_grid(init.t0, t_end, n_samples);
    std::vector<std::vector<double>> samples;
    try {
        traj.stats = DormandPrince54::integrate(rhs, init.t0, y0, t_end, opts, traj.t, samples);
    } catch (const NumericalError& e) {
        std::ostringstream os;
        os << e.what() << " (eps=" << eps << ")";
        throw NumericalError(os.str());
    } catch (const EvalError& e) {
        std::ostringstream os;
        os << e.what() << " (eps=" << eps << ")";
        throw EvalError(os.str());
    }
    traj.positions.resize(samples.size());
    traj.velocities.resize(samples.size());
    for (std::size_t s = 0; s < samples.size(); ++s) {
        traj.positions[s].assign(samples[s].begin(), samples[s].begin() + d);
        traj.velocities[s].assign(samples[s].begin() + d, samples[s].end());
    }
    return traj;
}

GeodesicFamily solve_family(const ChristoffelField& gamma, const GeodesicInit& init,
                            double t_end, const EpsilonGrid& grid, double tol, int n_samples) {
    GeodesicFamily fam;
    fam.t = uniform_grid(init.t0, t_end, n_samples);
    for (double eps : grid.values())
        fam.members.push_back(integrate_geodesic(gamma, init, t_end, eps, tol, n_samples));
    return fam;
}

std::vector<double> trajectory_norms(const GeneralizedMetric& m, const Trajectory& traj) {
    const int d = m.dim();
    std::vector<double> out(traj.t.size(), 0.0);
    for (std::size_t s = 0; s < traj.t.size(); ++s) {
        Bindings b = m.make_bindings(traj.positions[s], traj.eps);
        double q = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (m.component(i, j).is_zero()) continue;
                q += m.component(i, j).evaluate(b) * traj.velocities[s][i] *
                     traj.velocities[s][j];
            }
        out[s] = q;
    }
    return out;
}

PpWaveReducedState ppwave_reduced_rhs(const Expr& f, const PpWaveReducedState& s, double u,
                                      double eps, const DeltaNet& net) {
    static thread_local Bindings b;
    b.names.clear();
    b.values.clear();
    b.eps = eps;
    b.delta = &net;
    b.set("x", s.x);
    b.set("y", s.y);
    const double d0 = net.evaluate(0, u, eps);
    const double d1 = net.evaluate(1, u, eps);
    double fv = 0.0, fx = 0.0, fy = 0.0;
    if (d0 != 0.0 || d1 != 0.0) {
        fv = f.evaluate(b);
        fx = f.differentiate("x").evaluate(b);
        fy = f.differentiate("y").evaluate(b);
    }
    PpWaveReducedState ds;
    ds.v = s.vdot;
    ds.x = s.xdot;
    ds.y = s.ydot;
    ds.vdot = fv * d1 + 2.0 * (fx * s.xdot + fy * s.ydot) * d0;
    ds.xdot = 0.5 * fx * d0;
    ds.ydot = 0.5 * fy * d0;
    return ds;
}

Trajectory integrate_ppwave_reduced(const Expr& f, const PpWaveReducedState& init, double u0,
                                    double u_end, double eps, const DeltaNet& net, double tol,
                                    int n_samples) {
    for (const auto& v : f.free_variables())
        if (v != "x" && v != "y")
            throw ConfigError("reduced plane-wave profile must depend on x,y only; found '" +
                              v + "'");
    const Expr fx = f.differentiate("x");
    const Expr fy = f.differentiate("y");

    Bindings b;
    b.eps = eps;
    b.delta = &net;
    b.set("x", 0.0);
    b.set("y", 0.0);

    auto rhs = [&](double u, std::span<const double> y, std::span<double> dydu) {
        b.values[0] = y[2];
        b.values[1] = y[4];
        const double d0 = net.evaluate(0, u, eps);
        const double d1 = net.evaluate(1, u, eps);
        double fv = 0.0, dfx = 0.0, dfy = 0.0;
        if (d0 != 0.0 || d1 != 0.0) {
            fv = f.evaluate(b);
            dfx = fx.evaluate(b);
            dfy = fy.evaluate(b);
        }
        dydu[0] = y[1];                                              // v' = vdot
        dydu[1] = fv * d1 + 2.0 * (dfx * y[3] + dfy * y[5]) * d0;    // vdot'
        dydu[2] = y[3];                                              // x'
        dydu[3] = 0.5 * dfx * d0;                                    // xdot'
        dydu[4] = y[5];                                              // y'
        dydu[5] = 0.5 * dfy * d0;                                    // ydot'
    };

    OdeOptions opts;
    opts.abs_tol = tol * kControllerSafety;
    opts.rel_tol = tol * kControllerSafety;
    opts.h_max = (u_end - u0) / 16.0;
    opts.step_cap = [&net, eps](double u, std::span<const double>) {
        const double r = net.radius(eps);
        const double dist = std::abs(u) - r;
        if (dist <= 0.0) return r / 10.0;
        return std::max(r / 10.0, 0.5 * dist);
    };

    std::vector<double> y0 = {init.v, init.vdot, init.x, init.xdot, init.y, init.ydot};
    Trajectory traj;
    traj.eps = eps;
    traj.t = uniform_grid(u0, u_end, n_samples);
    std::vector<std::vector<double>> samples;
    traj.stats = DormandPrince54::integrate(rhs, u0, y0, u_end, opts, traj.t, samples);
    traj.positions.resize(samples.size());
    traj.velocities.resize(samples.size());
    for (std::size_t s = 0; s < samples.size(); ++s) {
        traj.positions[s] = {samples[s][0], samples[s][2], samples[s][4]};   // v, x, y
        traj.velocities[s] = {samples[s][1], samples[s][3], samples[s][5]};  // vdot, xdot, ydot
    }
    return traj;
}

} // namespace gengeo
