#include "gengeo/properties.hpp"

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "gengeo/curvature.hpp"
#include "gengeo/quadrature.hpp"
#include "gengeo/scenario.hpp"
#include "gengeo/shadow.hpp"

namespace gengeo {

namespace {

using Result = std::optional<std::string>;

Result ok() { return std::nullopt; }

Result fail(const std::string& msg) { return msg; }

template <class T>
std::string str(const T& v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

GeodesicInit ppwave_init() {
    GeodesicInit init;
    init.t0 = -1.0;
    init.position = {-1.0, 0.0, 1.0, 1.0};
    init.velocity = {1.0, 0.0, 0.0, 0.0};
    return init;
}

// --- asymptotics ---------------------------------------------------------

Result growth_recovery() {
    EpsilonGrid grid = EpsilonGrid::geometric(0.3, 0.002, 7);
    for (int k = 0; k <= 3; ++k) {
        ScalarNet net{[k](double e) { return std::pow(e, -double(k)); }, "pow"};
        const double got = estimate_growth_order(net, grid).estimated_order;
        if (std::abs(got - k) > 0.05)
            return fail("order " + str(k) + " recovered as " + str(got));
    }
    return ok();
}

Result scaling_invariance() {
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);
    auto base = [](double e) { return e * e; };
    const bool want = is_strictly_nonzero(ScalarNet{base, "b"}, grid).decision;
    for (double c : {0.02, 0.7, 3.0, 120.0, -5.0}) {
        const bool got =
            is_strictly_nonzero(ScalarNet{[=](double e) { return c * base(e); }, "cb"}, grid)
                .decision;
        if (got != want) return fail("decision changed under scaling by " + str(c));
    }
    return ok();
}

Result uniform_implies_pointwise() {
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);
    FieldNet f = FieldNet::from_expr(parse_expr("2 + sin(x)*eps"), {"x"}, {}, nullptr, "f");
    Region region({{-1.0, 1.0}}, 17);
    if (!check_invertible_on(f, region, grid).decision) return fail("uniform test failed");
    Result bad = ok();
    region.for_each_point([&](std::span<const double> p) {
        std::vector<double> pt(p.begin(), p.end());
        ScalarNet at{[&f, pt](double e) { return f.sample(e, pt); }, "at"};
        if (!is_strictly_nonzero(at, grid).decision && !bad)
            bad = fail("pointwise failure at x=" + str(pt[0]));
    });
    return bad;
}

Result subbox_monotonicity() {
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);
    FieldNet f = FieldNet::from_expr(parse_expr("x^2 + eps"), {"x"}, {}, nullptr, "f");
    Region big({{-1.0, 1.0}}, 65);
    if (!check_invertible_on(f, big, grid).decision) return fail("parent region failed");
    for (auto inner : {std::array<double, 2>{-0.5, 0.5}, {0.25, 0.75}, {-1.0, 0.0}}) {
        if (!check_invertible_on(f, big.sub_box({inner}), grid).decision)
            return fail("sub-box [" + str(inner[0]) + "," + str(inner[1]) + "] failed");
    }
    return ok();
}

// --- fieldexpr ------------------------------------------------------------

Result derivative_matches_fd() {
    const char* exprs[] = {"x^2*y + y^3", "sin(x*y) + cos(x)", "exp(x/2)*tanh(y)",
                           "sqrt(x + 3)", "log(x + 4)/y"};
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (const char* text : exprs) {
        Expr e = parse_expr(text);
        Expr dx = e.differentiate("x");
        for (int t = 0; t < 20; ++t) {
            Bindings b;
            b.set("x", dist(rng));
            b.set("y", 0.6 + 0.3 * dist(rng));
            Bindings bp = b, bm = b;
            const double h = 1e-5;
            bp.values[0] += h;
            bm.values[0] -= h;
            const double fd = (e.evaluate(bp) - e.evaluate(bm)) / (2 * h);
            const double ex = dx.evaluate(b);
            if (std::abs(fd - ex) > 1e-6 * (1.0 + std::abs(ex)))
                return fail(std::string(text) + ": fd=" + str(fd) + " exact=" + str(ex));
        }
    }
    return ok();
}

Result delta_unit_mass() {
    auto net = DeltaNet(DeltaProfile::bump());
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);
    for (double eps : grid.values()) {
        const double r = net.radius(eps);
        const double i0 = integrate([&](double u) { return net.evaluate(0, u, eps); }, -r, r,
                                    {0.0}, 1e-12);
        if (std::abs(i0 - 1.0) > 1e-8) return fail("mass " + str(i0) + " at eps " + str(eps));
    }
    return ok();
}

Result delta1_moments() {
    auto net = DeltaNet(DeltaProfile::bump());
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);
    for (double eps : grid.values()) {
        const double r = net.radius(eps);
        const double m0 = integrate([&](double u) { return net.evaluate(1, u, eps); }, -r, r,
                                    {0.0}, 1e-12);
        const double m1 = integrate([&](double u) { return u * net.evaluate(1, u, eps); }, -r,
                                    r, {0.0}, 1e-12);
        if (std::abs(m0) > 1e-6) return fail("first moment " + str(m0));
        if (std::abs(m1 + 1.0) > 1e-6) return fail("u-moment " + str(m1));
    }
    return ok();
}

Result evaluation_deterministic() {
    auto net = DeltaNet(DeltaProfile::bump());
    Expr e = parse_expr("sin(x)*delta(u) + exp(y)/(1 + x^2) + eps^2");
    Bindings b;
    b.eps = 0.05;
    b.delta = &net;
    b.set("x", 0.3);
    b.set("y", -1.2);
    b.set("u", 0.01);
    const double v1 = e.evaluate(b);
    const double v2 = e.evaluate(b);
    if (std::memcmp(&v1, &v2, sizeof v1) != 0) return fail("bit mismatch");
    return ok();
}

// --- metric ----------------------------------------------------------------

Result inverse_identity() {
    std::mt19937 rng(31u);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (const char* name : {"ppwave", "minkowski", "sphere2"}) {
        auto m = ScenarioRegistry::find(name).instantiate();
        const int d = m.dim();
        for (int t = 0; t < 100; ++t) {
            std::vector<double> p(d);
            for (int i = 0; i < d; ++i) p[i] = 0.9 + 0.4 * dist(rng);
            const double eps = 0.05 + 0.2 * (dist(rng) + 1.0);
            auto ev = m.evaluate(p, eps);
            auto inv = m.inverse_at(p, eps);
            double err = 0.0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double s = 0.0;
                    for (int k = 0; k < d; ++k) s += inv[i * d + k] * ev.at(k, j, d);
                    err = std::max(err, std::abs(s - (i == j ? 1.0 : 0.0)));
                }
            if (err > 1e-10) return fail(std::string(name) + ": identity error " + str(err));
        }
    }
    return ok();
}

std::vector<std::vector<Expr>> negligible_perturbation(const GeneralizedMetric& m) {
    const Expr eps8 = parse_expr("eps^8");
    std::vector<std::vector<Expr>> h(m.dim(), std::vector<Expr>(m.dim()));
    const auto& c = m.coordinates();
    for (int i = 0; i < m.dim(); ++i)
        for (int j = i; j < m.dim(); ++j) {
            Expr base = parse_expr("0.3*sin(" + c[0] + " + " + c[m.dim() - 1] + ") + 0.2");
            h[i][j] = eps8 * base;
        }
    return h;
}

Result index_stability() {
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);
    for (const char* name : {"ppwave", "minkowski"}) {
        auto m = ScenarioRegistry::find(name).instantiate();
        Region region = name == std::string("ppwave")
                            ? Region({{-0.3, 0.3}, {-1, 1}, {0.5, 1.5}, {0.5, 1.5}},
                                     std::vector<int>{5, 3, 3, 3})
                            : Region({{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}}, 3);
        auto pert = m.perturbed(negligible_perturbation(m), "+h");
        auto r0 = m.compute_index(region, grid);
        auto r1 = pert.compute_index(region, grid);
        if (!r0.stable || !r1.stable) return fail(std::string(name) + ": unstable index");
        if (r0.index != r1.index || r0.index != 1)
            return fail(std::string(name) + ": index changed " + str(r0.index) + " -> " +
                        str(r1.index));
    }
    return ok();
}

Result eigenvalue_perturbation_bound() {
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);
    auto m = ScenarioRegistry::find("ppwave").instantiate();
    auto pert = m.perturbed(negligible_perturbation(m), "+h");
    Region region({{-0.2, 0.2}, {-1, 1}, {0.7, 1.3}, {0.7, 1.3}}, std::vector<int>{5, 3, 3, 3});
    Result bad = ok();
    for (double eps : grid.tail()) {
        region.for_each_point([&](std::span<const double> p) {
            if (bad) return;
            auto e0 = m.evaluate(p, eps);
            auto e1 = pert.evaluate(p, eps);
            // Frobenius norm dominates the spectral norm; the sharp spectral
            // check lives in the unit suite.
            double frob = 0.0;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    const double dv = e1.at(i, j, 4) - e0.at(i, j, 4);
                    frob += dv * dv;
                }
            const double bound = std::sqrt(frob);
            for (int i = 0; i < 4; ++i) {
                const double gap = std::abs(e1.eigenvalues[i] - e0.eigenvalues[i]);
                if (gap > bound + 1e-13)
                    bad = fail("gap " + str(gap) + " exceeds norm bound " + str(bound));
            }
        });
        if (bad) break;
    }
    return bad;
}

Result det_matches_eigenvalue_product() {
    std::mt19937 rng(77u);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    auto m = ScenarioRegistry::find("ppwave").instantiate();
    for (int t = 0; t < 60; ++t) {
        std::vector<double> p = {0.05 * dist(rng), dist(rng), 1.0 + dist(rng),
                                 1.0 + dist(rng)};
        const double eps = 0.0125 + 0.09 * (dist(rng) + 1.0);
        auto ev = m.evaluate(p, eps);
        double prod = 1.0;
        for (double lam : ev.eigenvalues) prod *= lam;
        if (std::abs(ev.det - prod) > 1e-8 * std::max(1.0, std::abs(ev.det)))
            return fail("det " + str(ev.det) + " vs product " + str(prod));
    }
    return ok();
}

// --- levicivita --------------------------------------------------------------

Result torsion_free_structural() {
    for (const char* name : {"ppwave", "sphere2", "remark35", "minkowski"}) {
        auto gamma = christoffel(ScenarioRegistry::find(name).instantiate());
        const int d = gamma.dim();
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    if (!gamma.symbol(k, i, j).same_object(gamma.symbol(k, j, i)))
                        return fail(std::string(name) + ": non-shared mirrored symbol");
    }
    return ok();
}

Result metric_compatibility() {
    std::mt19937 rng(5150u);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);
    for (const char* name : {"ppwave", "sphere2"}) {
        auto m = ScenarioRegistry::find(name).instantiate();
        auto gamma = christoffel(m);
        const int d = m.dim();
        std::vector<Expr> dg(d * d * d);
        for (int a = 0; a < d; ++a)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    dg[(a * d + i) * d + j] =
                        m.component(i, j).differentiate(m.coordinates()[a]);
        for (double eps : grid.values()) {
            for (int t = 0; t < 20; ++t) {
                std::vector<double> p(d);
                for (int c = 0; c < d; ++c)
                    p[c] = name == std::string("sphere2") ? 1.2 + 0.5 * dist(rng)
                                                          : 0.9 + 0.4 * dist(rng);
                if (name == std::string("ppwave")) p[0] = 0.03 * dist(rng);
                Bindings b = m.make_bindings(p, eps);
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j)
                        for (int k = 0; k < d; ++k) {
                            const double lhs = dg[(i * d + j) * d + k].evaluate(b);
                            double rhs = 0.0;
                            for (int mm = 0; mm < d; ++mm) {
                                if (!gamma.symbol(mm, i, j).is_zero())
                                    rhs += gamma.evaluate(mm, i, j, b) *
                                           m.component(mm, k).evaluate(b);
                                if (!gamma.symbol(mm, i, k).is_zero())
                                    rhs += gamma.evaluate(mm, i, k, b) *
                                           m.component(j, mm).evaluate(b);
                            }
                            if (std::abs(lhs - rhs) > 1e-8 * (1.0 + std::abs(lhs)))
                                return fail(std::string(name) + ": D5 residual " +
                                            str(std::abs(lhs - rhs)));
                        }
            }
        }
    }
    return ok();
}

Result smooth_case_consistency() {
    auto m = ScenarioRegistry::find("sphere2").instantiate();
    auto gamma = christoffel(m);
    for (const auto& [k, i, j] : gamma.nonzero())
        if (gamma.symbol(k, i, j).references_eps())
            return fail("eps leaked into a smooth metric's symbols");
    for (double theta : {0.5, 1.3, 2.2}) {
        Bindings b = m.make_bindings(std::vector<double>{theta, 1.0}, 0.3);
        const double g_tpp = gamma.evaluate(0, 1, 1, b);
        const double g_ptp = gamma.evaluate(1, 0, 1, b);
        if (std::abs(g_tpp + std::sin(theta) * std::cos(theta)) > 1e-9)
            return fail("Gamma^theta_phiphi mismatch at theta=" + str(theta));
        if (std::abs(g_ptp - std::cos(theta) / std::sin(theta)) > 1e-9)
            return fail("Gamma^phi_thetaphi mismatch at theta=" + str(theta));
    }
    return ok();
}

Result koszul_identity() {
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);
    for (const char* name : {"ppwave", "sphere2", "minkowski"}) {
        auto m = ScenarioRegistry::find(name).instantiate();
        auto gamma = christoffel(m);
        const int d = m.dim();
        VectorField xi, eta, zeta;
        xi.comp.resize(d);
        eta.comp.resize(d);
        zeta.comp.resize(d);
        const auto& c = m.coordinates();
        for (int i = 0; i < d; ++i) {
            xi.comp[i] = parse_expr(i % 2 ? "1" : "sin(" + c[(i + 1) % d] + ")");
            eta.comp[i] = parse_expr(i % 2 ? c[(i + 2) % d] : "1");
            zeta.comp[i] = parse_expr(i == 0 ? c[0] + "^2" : "1/2");
        }
        std::vector<std::vector<double>> points;
        for (double w : {-0.02, 0.7})
            points.push_back(std::vector<double>(
                d, name == std::string("sphere2") ? 1.0 + 0.3 * w : 1.0 + w * 0.1));
        if (name == std::string("ppwave")) points[0][0] = 0.01;
        for (double eps : grid.values()) {
            auto r = koszul_residual(gamma, xi, eta, zeta, points, eps);
            if (r.max_residual > 1e-8 * r.scale)
                return fail(std::string(name) + ": residual " + str(r.max_residual) +
                            " at eps " + str(eps));
        }
    }
    return ok();
}

// --- geodesic -----------------------------------------------------------------

Result norm_conservation() {
    const double tol = 1e-10;
    auto pp = ScenarioRegistry::find("ppwave").instantiate();
    auto gamma = christoffel(pp);
    for (double eps : {0.2, 0.05, 0.0125}) {
        auto traj = integrate_geodesic(gamma, ppwave_init(), 1.0, eps, tol, 201);
        auto qs = trajectory_norms(pp, traj);
        double scale = 1.0;
        for (std::size_t i = 0; i < traj.t.size(); ++i) {
            Bindings b = pp.make_bindings(traj.positions[i], eps);
            double s = 0.0;
            for (int a = 0; a < 4; ++a)
                for (int c = 0; c < 4; ++c) {
                    if (pp.component(a, c).is_zero()) continue;
                    s += std::abs(pp.component(a, c).evaluate(b) * traj.velocities[i][a] *
                                  traj.velocities[i][c]);
                }
            scale = std::max(scale, s);
        }
        for (double q : qs)
            if (std::abs(q - qs.front()) > 10.0 * tol * scale)
                return fail("drift " + str(std::abs(q - qs.front())) + " at eps " + str(eps));
    }
    return ok();
}

Result geodesic_residual() {
    const double tol = 1e-10;
    auto pp = ScenarioRegistry::find("ppwave").instantiate();
    auto gamma = christoffel(pp);
    const double eps = 0.05;
    auto traj = integrate_geodesic(gamma, ppwave_init(), 1.0, eps, tol, 401);
    const double h = traj.t[1] - traj.t[0];
    for (std::size_t i = 2; i + 2 < traj.t.size(); ++i) {
        // Inside the mollifier window a uniform grid cannot resolve the
        // dynamics; the reduced/full cross-check is the oracle there.
        if (std::abs(traj.t[i]) < eps + 2.5 * h) continue;
        auto acc = geodesic_rhs(gamma, traj.positions[i], traj.velocities[i], eps);
        for (std::size_t c = 0; c < acc.size(); ++c) {
            const double fd = (-traj.velocities[i + 2][c] + 8.0 * traj.velocities[i + 1][c] -
                               8.0 * traj.velocities[i - 1][c] + traj.velocities[i - 2][c]) /
                              (12.0 * h);
            if (std::abs(fd - acc[c]) > 100.0 * tol)
                return fail("residual " + str(std::abs(fd - acc[c])) + " at t=" +
                            str(traj.t[i]));
        }
    }
    return ok();
}

Result reduced_full_agreement() {
    auto pp = ScenarioRegistry::find("ppwave").instantiate();
    auto gamma = christoffel(pp);
    Expr f = parse_expr("x^2 - y^2");
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.025, 4);
    for (double eps : grid.values()) {
        auto full = integrate_geodesic(gamma, ppwave_init(), 1.0, eps, 1e-11, 101);
        PpWaveReducedState s0{0.0, 0.0, 1.0, 0.0, 1.0, 0.0};
        auto red = integrate_ppwave_reduced(f, s0, -1.0, 1.0, eps, *pp.delta(), 1e-11, 101);
        for (std::size_t i = 0; i < full.t.size(); ++i) {
            const double dev =
                std::max({std::abs(full.positions[i][1] - red.positions[i][0]),
                          std::abs(full.positions[i][2] - red.positions[i][1]),
                          std::abs(full.positions[i][3] - red.positions[i][2])});
            if (dev > 1e-8) return fail("deviation " + str(dev) + " at eps " + str(eps));
        }
    }
    return ok();
}

Result affine_reparametrization() {
    auto sphere = ScenarioRegistry::find("sphere2").instantiate();
    auto gamma = christoffel(sphere);
    GeodesicInit a, b;
    a.t0 = b.t0 = 0.0;
    a.position = b.position = {1.2, 0.3};
    a.velocity = {0.4, 0.5};
    b.velocity = {0.8, 1.0};
    auto slow = integrate_geodesic(gamma, a, 2.0, 0.1, 1e-11, 401);
    auto fast = integrate_geodesic(gamma, b, 1.0, 0.1, 1e-11, 201);
    for (std::size_t i = 0; i < fast.t.size(); ++i)
        for (int c = 0; c < 2; ++c)
            if (std::abs(fast.positions[i][c] - slow.positions[2 * i][c]) > 1e-6)
                return fail("mismatch at t=" + str(fast.t[i]));
    return ok();
}

// --- curvature ------------------------------------------------------------------

Result curvature_identities() {
    struct Case {
        const char* name;
        std::vector<std::vector<double>> points;
        double eps;
    };
    const std::vector<Case> cases = {
        {"minkowski", {{0, 0, 0, 0}}, 0.1},
        {"sphere2", {{0.6, 0.2}, {1.4, 2.0}, {2.3, 1.0}}, 0.1},
        {"ppwave", {{0.0, 0.1, 1.0, 1.0}, {0.02, 0.0, 0.8, 1.2}, {0.4, 0.0, 1.0, 1.0}}, 0.05},
    };
    for (const auto& c : cases) {
        auto m = ScenarioRegistry::find(c.name).instantiate();
        auto diag = curvature_diagnostics(curvature(m, christoffel(m)), c.points, c.eps);
        const double bound = 1e-8 * diag.scale;
        if (diag.antisym_first > bound || diag.antisym_second > bound ||
            diag.pair_symmetry > bound || diag.first_bianchi > bound ||
            (!diag.contracted_bianchi_skipped && diag.contracted_bianchi > bound))
            return fail(std::string(c.name) + ": identity violation beyond " + str(bound));
    }
    return ok();
}

Result flat_structural_zero() {
    auto flat = ScenarioRegistry::find("minkowski").instantiate();
    if (!curvature(flat, christoffel(flat)).riemann_is_structurally_zero())
        return fail("minkowski riemann not literally zero");
    auto skew = GeneralizedMetric::build({"a", "b"}, {{"2", "1/2"}, {"", "3"}});
    if (!curvature(skew, christoffel(skew)).riemann_is_structurally_zero())
        return fail("constant-coefficient riemann not literally zero");
    return ok();
}

Result scale_covariance() {
    auto m = ScenarioRegistry::find("sphere2").instantiate();
    auto scaled =
        GeneralizedMetric::build({"theta", "phi"}, {{"4", "0"}, {"", "4*sin(theta)^2"}});
    auto b0 = curvature(m, christoffel(m));
    auto b4 = curvature(scaled, christoffel(scaled));
    for (double theta : {0.7, 1.5, 2.1}) {
        Bindings bind0 = m.make_bindings(std::vector<double>{theta, 0.4}, 0.5);
        Bindings bind4 = scaled.make_bindings(std::vector<double>{theta, 0.4}, 0.5);
        for (int a = 0; a < 2; ++a)
            for (int bb = 0; bb < 2; ++bb)
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d) {
                        const double v0 = b0.riemann(a, bb, c, d).evaluate(bind0);
                        const double v4 = b4.riemann(a, bb, c, d).evaluate(bind4);
                        if (std::abs(v0 - v4) > 1e-9 * (1.0 + std::abs(v0)))
                            return fail("mixed Riemann changed under rescaling");
                    }
    }
    return ok();
}

// --- shadow ---------------------------------------------------------------------

Result pairing_linearity() {
    auto net = std::make_shared<DeltaNet>(DeltaProfile::bump());
    auto phi = TestDensity::parse("exp(-t^2)", "t", -3, 3);
    FieldNet u = FieldNet::from_expr(parse_expr("delta(t)"), {"t"}, {}, net, "u");
    FieldNet w = FieldNet::from_expr(parse_expr("sin(t) + 1"), {"t"}, {}, nullptr, "w");
    FieldNet combo =
        FieldNet::from_expr(parse_expr("3*delta(t) - 2*(sin(t) + 1)"), {"t"}, {}, net, "c");
    for (double eps : {0.2, 0.05, 0.0125}) {
        const double lhs = pair_density(combo, phi, eps);
        const double rhs = 3.0 * pair_density(u, phi, eps) - 2.0 * pair_density(w, phi, eps);
        if (std::abs(lhs - rhs) > 1e-10 * (1.0 + std::abs(rhs)))
            return fail("linearity violated at eps " + str(eps));
    }
    return ok();
}

Result mollifier_identity() {
    auto net = std::make_shared<DeltaNet>(DeltaProfile::bump());
    FieldNet d0 = FieldNet::from_expr(parse_expr("delta(t)"), {"t"}, {}, net, "d0");
    const char* densities[] = {"exp(-t^2)", "1/(1 + t^2)", "(2 + sin(t))/2",
                               "exp(-t^2/4)*(1 + t)", "cos(t)"};
    EpsilonGrid grid = EpsilonGrid::geometric(0.1, 0.00625, 5);
    for (const char* text : densities) {
        auto phi = TestDensity::parse(text, "t", -3, 3);
        std::vector<std::pair<double, double>> samples;
        for (double e : grid.values()) samples.emplace_back(e, pair_density(d0, phi, e));
        const double limit = estimate_shadow(samples).limit;
        if (std::abs(limit - phi(0.0)) > 1e-6)
            return fail(std::string(text) + ": limit " + str(limit) + " vs " + str(phi(0.0)));
    }
    return ok();
}

Result derivative_pairing() {
    auto net = std::make_shared<DeltaNet>(DeltaProfile::bump());
    FieldNet d1 = FieldNet::from_expr(parse_expr("delta1(t)"), {"t"}, {}, net, "d1");
    FieldNet d0 = FieldNet::from_expr(parse_expr("delta(t)"), {"t"}, {}, net, "d0");
    auto phi = TestDensity::parse("t*exp(-t^2)", "t", -3, 3);
    auto dphi = TestDensity::parse("exp(-t^2) - 2*t^2*exp(-t^2)", "t", -3, 3);
    EpsilonGrid grid = EpsilonGrid::geometric(0.1, 0.00625, 5);
    std::vector<std::pair<double, double>> samples;
    for (double e : grid.values()) {
        const double v = pair_density(d1, phi, e);
        const double ibp = -pair_density(d0, dphi, e);  // integration-by-parts oracle
        if (std::abs(v - ibp) > 1e-8 * (1.0 + std::abs(v)))
            return fail("IBP mismatch " + str(v - ibp) + " at eps " + str(e));
        samples.emplace_back(e, v);
    }
    const double limit = estimate_shadow(samples).limit;
    if (std::abs(limit - (-phi.derivative_at(0.0))) > 1e-5)
        return fail("limit " + str(limit) + " vs " + str(-phi.derivative_at(0.0)));
    return ok();
}

Result inverse_k_association() {
    auto g = GeneralizedMetric::build({"x", "y"}, {{"2 + sin(x)", "1/2"}, {"", "1 + y^2"}});
    auto h = GeneralizedMetric::build(
        {"x", "y"}, {{"2 + sin(x) + eps*cos(x)", "1/2 + eps*0.3*x"}, {"", "1 + y^2 + eps"}});
    Region region({{-1.0, 1.0}, {-1.0, 1.0}}, 33);
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);
    const auto& ginv = g.inverse_exprs();
    const auto& hinv = h.inverse_exprs();
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) {
            auto net = FieldNet::from_expr(hinv[i * 2 + j], {"x", "y"}, {}, nullptr, "hinv");
            if (!k_association_check(net, ginv[i * 2 + j], 2, region, grid).pass)
                return fail("component (" + str(i) + "," + str(j) + ") lost k-association");
        }
    return ok();
}

} // namespace

const std::vector<PropertyCheck>& module_property_checks() {
    static const std::vector<PropertyCheck> checks = {
        {"asymptotics", "growth-order recovery for integer power laws", growth_recovery},
        {"asymptotics", "strict-nonzero decision invariant under scaling", scaling_invariance},
        {"asymptotics", "uniform invertibility implies pointwise", uniform_implies_pointwise},
        {"asymptotics", "invertibility monotone under sub-boxes", subbox_monotonicity},
        {"fieldexpr", "symbolic derivatives match finite differences", derivative_matches_fd},
        {"fieldexpr", "mollifier carries unit mass per eps", delta_unit_mass},
        {"fieldexpr", "mollifier derivative moment identities", delta1_moments},
        {"fieldexpr", "evaluation is bit-deterministic", evaluation_deterministic},
        {"metric", "cofactor inverse solves g*ginv = id", inverse_identity},
        {"metric", "index stable under negligible perturbation", index_stability},
        {"metric", "eigenvalue perturbation bound", eigenvalue_perturbation_bound},
        {"metric", "determinant equals eigenvalue product", det_matches_eigenvalue_product},
        {"levicivita", "torsion-free by construction", torsion_free_structural},
        {"levicivita", "metric compatibility residual", metric_compatibility},
        {"levicivita", "smooth metrics give classical symbols", smooth_case_consistency},
        {"levicivita", "Koszul identity residual", koszul_identity},
        {"geodesic", "norm conservation along trajectories", norm_conservation},
        {"geodesic", "velocity residual on the sample grid", geodesic_residual},
        {"geodesic", "reduced and full impulsive paths agree", reduced_full_agreement},
        {"geodesic", "affine reparametrization", affine_reparametrization},
        {"curvature", "classical identities at sampled points", curvature_identities},
        {"curvature", "constant metrics fold to literal zero", flat_structural_zero},
        {"curvature", "mixed Riemann invariant under rescaling", scale_covariance},
        {"shadow", "pairing linearity", pairing_linearity},
        {"shadow", "mollifier shadow is the point value", mollifier_identity},
        {"shadow", "derivative pairing with IBP oracle", derivative_pairing},
        {"shadow", "inverse metric keeps k-association", inverse_k_association},
    };
    return checks;
}

} // namespace gengeo
