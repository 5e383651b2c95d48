#include <doctest.h>

#include <cmath>
#include <random>

#include "gengeo/christoffel.hpp"
#include "gengeo/geodesic.hpp"
#include "gengeo/scenario.hpp"

using namespace gengeo;

TEST_CASE("flat metrics have structurally zero symbols") {
    auto gamma = christoffel(ScenarioRegistry::find("minkowski").instantiate());
    CHECK(gamma.nonzero().empty());
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) CHECK(gamma.symbol(k, i, j).is_zero());
}

TEST_CASE("round sphere symbols match the textbook values") {
    auto m = ScenarioRegistry::find("sphere2").instantiate();
    auto gamma = christoffel(m);
    // Coordinates: theta=0, phi=1.
    for (double theta : {0.4, 1.0, 1.7, 2.6}) {
        Bindings b = m.make_bindings(std::vector<double>{theta, 0.8}, 0.5);
        CHECK(gamma.evaluate(0, 1, 1, b) ==
              doctest::Approx(-std::sin(theta) * std::cos(theta)).epsilon(1e-12));
        CHECK(gamma.evaluate(1, 0, 1, b) ==
              doctest::Approx(std::cos(theta) / std::sin(theta)).epsilon(1e-12));
        CHECK(gamma.evaluate(0, 0, 0, b) == 0.0);
        CHECK(gamma.evaluate(1, 1, 1, b) == 0.0);
    }
    // eps-independent smooth metric: no eps or delta in any symbol.
    for (const auto& [k, i, j] : gamma.nonzero()) CHECK_FALSE(gamma.symbol(k, i, j).references_eps());
}

TEST_CASE("plane-wave symbols follow the impulsive pattern") {
    auto m = ScenarioRegistry::find("ppwave").instantiate();
    auto gamma = christoffel(m);
    // Coordinates u=0, v=1, x=2, y=3; f = x^2 - y^2.
    const double eps = 0.05;
    for (double u : {-0.02, 0.0, 0.01}) {
        const double x = 1.2, y = 0.7;
        Bindings b = m.make_bindings(std::vector<double>{u, 0.0, x, y}, eps);
        const double d0 = m.delta()->evaluate(0, u, eps);
        const double d1 = m.delta()->evaluate(1, u, eps);
        const double f = x * x - y * y, fx = 2.0 * x, fy = -2.0 * y;
        CHECK(gamma.evaluate(1, 0, 0, b) == doctest::Approx(-f * d1).epsilon(1e-12));
        CHECK(gamma.evaluate(1, 0, 2, b) == doctest::Approx(-fx * d0).epsilon(1e-12));
        CHECK(gamma.evaluate(1, 0, 3, b) == doctest::Approx(-fy * d0).epsilon(1e-12));
        CHECK(gamma.evaluate(2, 0, 0, b) == doctest::Approx(-0.5 * fx * d0).epsilon(1e-12));
        CHECK(gamma.evaluate(3, 0, 0, b) == doctest::Approx(-0.5 * fy * d0).epsilon(1e-12));
    }
    // Exactly the symbols above (and their i<->j mirrors) are nonzero.
    for (const auto& [k, i, j] : gamma.nonzero()) {
        const bool expected = (k == 1 && i == 0 && j == 0) ||
                              (k == 1 && ((i == 0 && (j == 2 || j == 3)) ||
                                          (j == 0 && (i == 2 || i == 3)))) ||
                              ((k == 2 || k == 3) && i == 0 && j == 0);
        CHECK(expected);
    }
}

TEST_CASE("lower-index symmetry is structural") {
    for (const char* name : {"ppwave", "sphere2", "remark35"}) {
        auto gamma = christoffel(ScenarioRegistry::find(name).instantiate());
        const int d = gamma.dim();
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    CHECK(gamma.symbol(k, i, j).same_object(gamma.symbol(k, j, i)));
    }
}

TEST_CASE("covariant derivative in coordinate directions") {
    // Flat plane, xi = (x, y): D_x xi = (1, 0); constant fields are parallel.
    auto flat = GeneralizedMetric::build({"x", "y"}, {{"1", "0"}, {"", "1"}});
    auto gamma = christoffel(flat);
    VectorField xi;
    xi.comp = {parse_expr("x"), parse_expr("y")};
    auto d = covariant_derivative(gamma, xi, 0);
    Bindings b = flat.make_bindings(std::vector<double>{0.3, -0.2}, 0.5);
    CHECK(d.comp[0].evaluate(b) == doctest::Approx(1.0));
    CHECK(d.comp[1].evaluate(b) == doctest::Approx(0.0));

    VectorField constant;
    constant.comp = {parse_expr("2"), parse_expr("-3")};
    auto dc = covariant_derivative(gamma, constant, 1);
    CHECK(dc.comp[0].is_zero());
    CHECK(dc.comp[1].is_zero());

    // Sphere: D_theta d_phi has phi-component cot(theta).
    auto sphere = ScenarioRegistry::find("sphere2").instantiate();
    auto gs = christoffel(sphere);
    auto dphi = covariant_derivative(gs, VectorField::coordinate(2, 1), 0);
    Bindings bs = sphere.make_bindings(std::vector<double>{1.1, 0.4}, 0.5);
    CHECK(dphi.comp[1].evaluate(bs) == doctest::Approx(1.0 / std::tan(1.1)).epsilon(1e-12));
}

TEST_CASE("metric compatibility holds numerically") {
    // d_i g_jk = Gamma^m_{ij} g_mk + Gamma^m_{ik} g_jm, sampled at random
    // points for every tail eps.
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);
    for (const char* name : {"ppwave", "sphere2"}) {
        auto m = ScenarioRegistry::find(name).instantiate();
        auto gamma = christoffel(m);
        const int d = m.dim();
        std::vector<std::vector<Expr>> dg(d, std::vector<Expr>(d * d));
        for (int a = 0; a < d; ++a)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    dg[a][i * d + j] = m.component(i, j).differentiate(m.coordinates()[a]);
        for (double eps : grid.tail()) {
            for (int trial = 0; trial < 20; ++trial) {
                std::vector<double> p(d);
                for (int c = 0; c < d; ++c)
                    p[c] = name == std::string("sphere2") ? 1.2 + 0.5 * dist(rng)
                                                          : 0.9 + 0.4 * dist(rng);
                if (name == std::string("ppwave")) p[0] = 0.02 * dist(rng);  // straddle u=0
                Bindings b = m.make_bindings(p, eps);
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j)
                        for (int k = 0; k < d; ++k) {
                            const double lhs = dg[i][j * d + k].evaluate(b);
                            double rhs = 0.0;
                            for (int mm = 0; mm < d; ++mm) {
                                if (!gamma.symbol(mm, i, j).is_zero())
                                    rhs += gamma.evaluate(mm, i, j, b) *
                                           m.component(mm, k).evaluate(b);
                                if (!gamma.symbol(mm, i, k).is_zero())
                                    rhs += gamma.evaluate(mm, i, k, b) *
                                           m.component(j, mm).evaluate(b);
                            }
                            CHECK(std::abs(lhs - rhs) <= 1e-8 * (1.0 + std::abs(lhs)));
                        }
            }
        }
    }
}

TEST_CASE("Koszul identity is a regression zero") {
    // Coordinate fields on flat space: exact zero.
    auto flat = ScenarioRegistry::find("minkowski").instantiate();
    auto gf = christoffel(flat);
    auto ex = VectorField::coordinate(4, 1);
    auto r0 = koszul_residual(gf, ex, ex, ex, {{0.1, 0.2, 0.3, 0.4}}, 0.5);
    CHECK(r0.max_residual == 0.0);

    // Sphere with genuinely varying fields.
    auto sphere = ScenarioRegistry::find("sphere2").instantiate();
    auto gs = christoffel(sphere);
    VectorField xi, eta, zeta;
    xi.comp = {parse_expr("sin(phi)"), parse_expr("cos(theta)")};
    eta.comp = {parse_expr("theta^2"), parse_expr("1")};
    zeta.comp = {parse_expr("1"), parse_expr("theta*phi")};
    auto rs = koszul_residual(gs, xi, eta, zeta, {{1.0, 1.0}, {0.7, 2.0}, {2.0, 0.3}}, 0.5);
    CHECK(rs.max_residual <= 1e-10 * rs.scale);

    // Plane wave inside the impulse window.
    auto pp = ScenarioRegistry::find("ppwave").instantiate();
    auto gp = christoffel(pp);
    VectorField a, b, c;
    a.comp = {parse_expr("1"), parse_expr("v"), parse_expr("x"), parse_expr("0")};
    b.comp = {parse_expr("u"), parse_expr("1"), parse_expr("0"), parse_expr("y")};
    c.comp = {parse_expr("0"), parse_expr("x*y"), parse_expr("1"), parse_expr("1")};
    auto rp = koszul_residual(gp, a, b, c, {{0.0, 0.1, 1.0, 1.0}, {0.02, 0.0, 0.8, 1.2}}, 0.05);
    CHECK(rp.max_residual <= 1e-8 * rp.scale);
}

TEST_CASE("derivative along a curve") {
    auto flat = ScenarioRegistry::find("minkowski").instantiate();
    auto gamma = christoffel(flat);
    const int n = 21;
    std::vector<double> ts(n);
    std::vector<std::vector<double>> pos(n, std::vector<double>(4, 0.0));
    std::vector<std::vector<double>> vel(n, std::vector<double>(4, 0.0));
    std::vector<std::vector<double>> xi_const(n, std::vector<double>{1.0, 2.0, 3.0, 4.0});
    std::vector<std::vector<double>> xi_linear(n, std::vector<double>(4, 0.0));
    for (int i = 0; i < n; ++i) {
        ts[i] = -1.0 + 2.0 * i / (n - 1);
        pos[i][1] = ts[i];
        vel[i][1] = 1.0;
        xi_linear[i][0] = ts[i];
    }
    auto dc = along_curve_derivative(gamma, ts, pos, vel, xi_const, 0.5);
    for (const auto& row : dc)
        for (double v : row) CHECK(std::abs(v) <= 1e-10);
    auto dl = along_curve_derivative(gamma, ts, pos, vel, xi_linear, 0.5);
    for (const auto& row : dl) {
        CHECK(row[0] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(row[1]) <= 1e-10);
    }
    CHECK_THROWS_AS(
        along_curve_derivative(gamma, std::vector<double>{0.0, 0.1, 0.2}, {}, {}, {}, 0.5),
        ConfigError);
}

TEST_CASE("velocity of an integrated geodesic is parallel along it") {
    // xi = gamma': the along-curve derivative is the geodesic residual and
    // must vanish to integration accuracy.
    auto sphere = ScenarioRegistry::find("sphere2").instantiate();
    auto gamma = christoffel(sphere);
    GeodesicInit init;
    init.t0 = 0.0;
    init.position = {1.1, 0.2};
    init.velocity = {0.3, 0.7};
    auto traj = integrate_geodesic(gamma, init, 1.5, 0.1, 1e-11, 301);
    auto dv = along_curve_derivative(gamma, traj.t, traj.positions, traj.velocities,
                                     traj.velocities, traj.eps);
    for (const auto& row : dv)
        for (double v : row) CHECK(std::abs(v) <= 1e-8);
}
