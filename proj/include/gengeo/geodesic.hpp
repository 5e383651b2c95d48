#pragma once
#include <span>
#include <vector>

#include "gengeo/christoffel.hpp"
#include "gengeo/epsilon_grid.hpp"
#include "gengeo/ode.hpp"

namespace gengeo {

struct GeodesicInit {
    double t0 = 0.0;
    std::vector<double> position;
    std::vector<double> velocity;
};

struct Trajectory {
    double eps = 0.0;
    std::vector<double> t;
    std::vector<std::vector<double>> positions;   // per t, d entries
    std::vector<std::vector<double>> velocities;  // per t, d entries
    OdeStats stats;
};

// One trajectory per grid eps, all resampled (via the integrator's dense
// output) onto one shared uniform t-grid so families can be compared and
// extrapolated pointwise.
struct GeodesicFamily {
    std::vector<double> t;
    std::vector<Trajectory> members;  // ordered like the grid (decreasing eps)
};

// Acceleration of the geodesic equation: a^k = -Gamma^k_{ij} v^i v^j.
std::vector<double> geodesic_rhs(const ChristoffelField& gamma,
                                 std::span<const double> position,
                                 std::span<const double> velocity, double eps);

// Number of shared-grid samples used by default.
inline constexpr int kDefaultTrajectorySamples = 401;

Trajectory integrate_geodesic(const ChristoffelField& gamma, const GeodesicInit& init,
                              double t_end, double eps, double tol,
                              int n_samples = kDefaultTrajectorySamples);

GeodesicFamily solve_family(const ChristoffelField& gamma, const GeodesicInit& init,
                            double t_end, const EpsilonGrid& grid, double tol,
                            int n_samples = kDefaultTrajectorySamples);

// g_eps(gamma', gamma') along the trajectory; constant for exact geodesics.
std::vector<double> trajectory_norms(const GeneralizedMetric& m, const Trajectory& traj);

// ---------------------------------------------------------------------------
// The reduced impulsive plane-wave system, an independent derivation of the
// same dynamics used as a cross-check against the full 4-D geodesic path.
// State layout: (v, vdot, x, xdot, y, ydot), with u the affine parameter:
//   x''(u) = 1/2 f_x delta(u),  y''(u) = 1/2 f_y delta(u),
//   v''(u) = f delta'(u) + 2 (f_x x' + f_y y') delta(u).

struct PpWaveReducedState {
    double v, vdot, x, xdot, y, ydot;
};

PpWaveReducedState ppwave_reduced_rhs(const Expr& f, const PpWaveReducedState& s, double u,
                                      double eps, const DeltaNet& net);

Trajectory integrate_ppwave_reduced(const Expr& f, const PpWaveReducedState& init, double u0,
                                    double u_end, double eps, const DeltaNet& net, double tol,
                                    int n_samples = kDefaultTrajectorySamples);

} // namespace gengeo
