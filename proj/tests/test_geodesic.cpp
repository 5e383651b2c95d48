#include <doctest.h>

#include <cmath>

#include "gengeo/geodesic.hpp"
#include "gengeo/scenario.hpp"

using namespace gengeo;

namespace {

GeodesicInit ppwave_init() {
    GeodesicInit init;
    init.t0 = -1.0;
    init.position = {-1.0, 0.0, 1.0, 1.0};  // (u, v, x, y)
    init.velocity = {1.0, 0.0, 0.0, 0.0};
    return init;
}

// Closed-form refraction limits for f = x^2 - y^2 and the init above:
// x -> 1 + u_+, y -> 1 - u_+, v -> 2 u_+.
double x_limit(double u) { return 1.0 + (u > 0 ? u : 0.0); }
double y_limit(double u) { return 1.0 - (u > 0 ? u : 0.0); }
double v_limit(double u) { return 2.0 * (u > 0 ? u : 0.0); }

} // namespace

TEST_CASE("geodesic right-hand sides") {
    auto flat = ScenarioRegistry::find("minkowski").instantiate();
    auto gf = christoffel(flat);
    auto acc = geodesic_rhs(gf, std::vector<double>{0, 0, 0, 0},
                            std::vector<double>{1, 2, 3, 4}, 0.1);
    for (double a : acc) CHECK(a == 0.0);

    // Equator of the sphere is a geodesic: acceleration vanishes at theta=pi/2.
    auto sphere = ScenarioRegistry::find("sphere2").instantiate();
    auto gs = christoffel(sphere);
    auto acc_s = geodesic_rhs(gs, std::vector<double>{M_PI / 2.0, 0.0},
                              std::vector<double>{0.0, 1.0}, 0.1);
    CHECK(std::abs(acc_s[0]) <= 1e-15);
    CHECK(std::abs(acc_s[1]) <= 1e-15);

    // Plane wave on the u-axis inside the support: xddot = 1/2 f_x delta.
    auto pp = ScenarioRegistry::find("ppwave").instantiate();
    auto gp = christoffel(pp);
    const double eps = 0.05, u = 0.01, x = 1.0, y = 1.0;
    auto acc_p = geodesic_rhs(gp, std::vector<double>{u, 0.0, x, y},
                              std::vector<double>{1.0, 0.0, 0.0, 0.0}, eps);
    const double d0 = pp.delta()->evaluate(0, u, eps);
    CHECK(acc_p[0] == 0.0);                                             // u stays affine
    CHECK(acc_p[2] == doctest::Approx(0.5 * 2.0 * x * d0).epsilon(1e-12));
    CHECK(acc_p[3] == doctest::Approx(-0.5 * 2.0 * y * d0).epsilon(1e-12));
}

TEST_CASE("flat geodesics are straight lines") {
    auto flat = ScenarioRegistry::find("minkowski").instantiate();
    auto gamma = christoffel(flat);
    GeodesicInit init;
    init.t0 = 0.0;
    init.position = {0, 0, 0, 0};
    init.velocity = {0, 1, 0, 0};
    auto traj = integrate_geodesic(gamma, init, 1.0, 0.1, 1e-10, 101);
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        CHECK(std::abs(traj.positions[i][1] - traj.t[i]) <= 1e-10);
        CHECK(std::abs(traj.velocities[i][1] - 1.0) <= 1e-10);
    }
}

TEST_CASE("reduced plane-wave right-hand side at a pinned point") {
    auto net = DeltaNet(DeltaProfile::bump());
    Expr f = parse_expr("x^2 - y^2");
    PpWaveReducedState s{0.0, 0.0, 1.0, 0.0, 1.0, 0.0};
    const double eps = 0.05;
    auto ds = ppwave_reduced_rhs(f, s, 0.0, eps, net);
    const double d0 = net.evaluate(0, 0.0, eps);
    CHECK(ds.xdot == doctest::Approx(d0).epsilon(1e-12));   // 1/2 * 2x * delta = delta
    CHECK(ds.ydot == doctest::Approx(-d0).epsilon(1e-12));
    CHECK(ds.vdot == doctest::Approx(0.0));                 // f(1,1) = 0 and delta1(0) = 0
    // Outside the support everything is ballistic.
    auto ds_out = ppwave_reduced_rhs(f, s, 0.2, eps, net);
    CHECK(ds_out.vdot == 0.0);
    CHECK(ds_out.xdot == 0.0);
    CHECK(ds_out.ydot == 0.0);
}

TEST_CASE("plane-wave geodesics approach the closed-form refraction") {
    auto pp = ScenarioRegistry::find("ppwave").instantiate();
    auto gamma = christoffel(pp);
    const double eps = 0.05;
    auto traj = integrate_geodesic(gamma, ppwave_init(), 1.0, eps, 1e-10);
    const auto& end_pos = traj.positions.back();
    // Endpoint within O(eps) of the limit (generous factor 3).
    CHECK(std::abs(end_pos[2] - 2.0) <= 3.0 * eps);
    CHECK(std::abs(end_pos[3] - 0.0) <= 3.0 * eps);
    CHECK(std::abs(end_pos[1] - 2.0) <= 3.0 * eps);

    // Halving eps roughly halves the endpoint error (first-order family).
    auto traj2 = integrate_geodesic(gamma, ppwave_init(), 1.0, eps / 2.0, 1e-10);
    const double e1 = std::abs(traj.positions.back()[2] - 2.0);
    const double e2 = std::abs(traj2.positions.back()[2] - 2.0);
    CHECK(e2 < e1);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.5));
}

TEST_CASE("full 4-d path and reduced system agree per eps") {
    auto pp = ScenarioRegistry::find("ppwave").instantiate();
    auto gamma = christoffel(pp);
    Expr f = parse_expr("x^2 - y^2");
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.025, 4);
    for (double eps : grid.values()) {
        auto full = integrate_geodesic(gamma, ppwave_init(), 1.0, eps, 1e-11, 201);
        PpWaveReducedState s0{0.0, 0.0, 1.0, 0.0, 1.0, 0.0};
        auto red = integrate_ppwave_reduced(f, s0, -1.0, 1.0, eps, *pp.delta(), 1e-11, 201);
        double dev = 0.0;
        for (std::size_t i = 0; i < full.t.size(); ++i) {
            // u must track the parameter exactly; v,x,y match the reduced ones.
            dev = std::max(dev, std::abs(full.positions[i][0] - full.t[i]));
            dev = std::max(dev, std::abs(full.positions[i][1] - red.positions[i][0]));
            dev = std::max(dev, std::abs(full.positions[i][2] - red.positions[i][1]));
            dev = std::max(dev, std::abs(full.positions[i][3] - red.positions[i][2]));
            dev = std::max(dev, std::abs(full.velocities[i][1] - red.velocities[i][0]));
            dev = std::max(dev, std::abs(full.velocities[i][2] - red.velocities[i][1]));
            dev = std::max(dev, std::abs(full.velocities[i][3] - red.velocities[i][2]));
        }
        CHECK(dev <= 1e-8);
    }
}

TEST_CASE("families share the t-grid and flat families are constant in eps") {
    auto flat = ScenarioRegistry::find("minkowski").instantiate();
    auto gamma = christoffel(flat);
    GeodesicInit init;
    init.t0 = 0.0;
    init.position = {0, 0, 0, 0};
    init.velocity = {1, 0.5, 0, 0};
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.025, 4);
    auto fam = solve_family(gamma, init, 1.0, grid, 1e-10, 51);
    REQUIRE(fam.members.size() == 4);
    for (const auto& traj : fam.members) {
        REQUIRE(traj.t.size() == fam.t.size());
        for (std::size_t i = 0; i < fam.t.size(); ++i) {
            CHECK(traj.t[i] == fam.t[i]);
            for (int c = 0; c < 4; ++c)
                CHECK(traj.positions[i][c] ==
                      doctest::Approx(fam.members[0].positions[i][c]).epsilon(1e-12));
        }
    }
}

TEST_CASE("norm conservation along integrated geodesics") {
    // g(gamma', gamma') is a constant of motion; drift is measured relative
    // to the largest magnitude the contraction's terms reach on the path.
    const double tol = 1e-10;

    auto sphere = ScenarioRegistry::find("sphere2").instantiate();
    auto gs = christoffel(sphere);
    GeodesicInit gi;
    gi.t0 = 0.0;
    gi.position = {1.0, 0.0};
    gi.velocity = {0.3, 0.8};
    auto traj = integrate_geodesic(gs, gi, 2.0, 0.1, tol, 101);
    auto norms = trajectory_norms(sphere, traj);
    for (double q : norms) CHECK(std::abs(q - norms.front()) <= 10.0 * tol * (1.0 + std::abs(q)));

    auto pp = ScenarioRegistry::find("ppwave").instantiate();
    auto gp = christoffel(pp);
    for (double eps : {0.2, 0.05, 0.0125}) {
        auto tp = integrate_geodesic(gp, ppwave_init(), 1.0, eps, tol, 201);
        auto qs = trajectory_norms(pp, tp);
        double scale = 1.0;
        for (std::size_t i = 0; i < tp.t.size(); ++i) {
            Bindings b = pp.make_bindings(tp.positions[i], eps);
            double s = 0.0;
            for (int a = 0; a < 4; ++a)
                for (int c = 0; c < 4; ++c) {
                    if (pp.component(a, c).is_zero()) continue;
                    s += std::abs(pp.component(a, c).evaluate(b) * tp.velocities[i][a] *
                                  tp.velocities[i][c]);
                }
            scale = std::max(scale, s);
        }
        for (double q : qs) CHECK(std::abs(q - qs.front()) <= 10.0 * tol * scale);
    }
}

TEST_CASE("geodesic residual on the sample grid") {
    // Finite-difference the sampled velocities and compare against the
    // acceleration field. Checked where the dynamics are resolved by the
    // uniform grid: everywhere for smooth metrics, outside the mollifier
    // window (plus the stencil width) for the impulsive one; inside the
    // window the reduced/full cross-check above is the sharp oracle.
    auto check_residual = [](const ChristoffelField& gamma, const Trajectory& traj,
                             double skip_lo, double skip_hi, double bound) {
        const double h = traj.t[1] - traj.t[0];
        double worst = 0.0;
        for (std::size_t i = 2; i + 2 < traj.t.size(); ++i) {
            if (traj.t[i] > skip_lo - 2.5 * h && traj.t[i] < skip_hi + 2.5 * h) continue;
            auto acc = geodesic_rhs(gamma, traj.positions[i], traj.velocities[i], traj.eps);
            for (std::size_t c = 0; c < acc.size(); ++c) {
                const double fd = (-traj.velocities[i + 2][c] + 8.0 * traj.velocities[i + 1][c] -
                                   8.0 * traj.velocities[i - 1][c] +
                                   traj.velocities[i - 2][c]) /
                                  (12.0 * h);
                worst = std::max(worst, std::abs(fd - acc[c]));
            }
        }
        CHECK(worst <= bound);
    };

    const double tol = 1e-10;
    auto sphere = ScenarioRegistry::find("sphere2").instantiate();
    auto gs = christoffel(sphere);
    GeodesicInit gi;
    gi.t0 = 0.0;
    gi.position = {1.0, 0.0};
    gi.velocity = {0.3, 0.8};
    check_residual(gs, integrate_geodesic(gs, gi, 2.0, 0.1, tol, 401), 1e9, 1e9, 100.0 * tol);

    auto pp = ScenarioRegistry::find("ppwave").instantiate();
    auto gp = christoffel(pp);
    const double eps = 0.05;
    check_residual(gp, integrate_geodesic(gp, ppwave_init(), 1.0, eps, tol, 401), -eps, eps,
                   100.0 * tol);
}

TEST_CASE("affine reparametrization scales the parameter") {
    // Doubling the initial velocity traverses the same path twice as fast:
    // gamma_c(t) = gamma(t0 + c (t - t0)).
    auto sphere = ScenarioRegistry::find("sphere2").instantiate();
    auto gs = christoffel(sphere);
    GeodesicInit a, b;
    a.t0 = b.t0 = 0.0;
    a.position = b.position = {1.2, 0.3};
    a.velocity = {0.4, 0.5};
    b.velocity = {0.8, 1.0};
    auto slow = integrate_geodesic(gs, a, 2.0, 0.1, 1e-11, 401);
    auto fast = integrate_geodesic(gs, b, 1.0, 0.1, 1e-11, 201);
    // fast.t[i] = i/200; slow at 2*fast.t[i] is slow.t[2i] on the 401 grid.
    for (std::size_t i = 0; i < fast.t.size(); ++i) {
        for (int c = 0; c < 2; ++c)
            CHECK(std::abs(fast.positions[i][c] - slow.positions[2 * i][c]) <= 1e-6);
    }
}

TEST_CASE("integration failures carry context") {
    // A metric engineered to blow up: 1-d with runaway acceleration.
    auto m = GeneralizedMetric::build({"x"}, {{"exp(-2*x^2)"}});
    auto gamma = christoffel(m);
    GeodesicInit init;
    init.t0 = 0.0;
    init.position = {0.0};
    init.velocity = {40.0};
    try {
        // Blow-up must not silently pass through as NaN trajectories: either
        // the run aborts with the failing eps attached, or states stay finite.
        auto traj = integrate_geodesic(gamma, init, 40.0, 0.5, 1e-10, 11);
        for (const auto& row : traj.positions)
            for (double v : row) CHECK(std::isfinite(v));
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("eps=") != std::string::npos);
    } catch (const EvalError& e) {
        CHECK(std::string(e.what()).find("eps=") != std::string::npos);
    }
}
