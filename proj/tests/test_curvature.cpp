#include <doctest.h>

#include <cmath>

#include "gengeo/curvature.hpp"
#include "gengeo/scenario.hpp"

using namespace gengeo;

namespace {

CurvatureBundle bundle_for(const GeneralizedMetric& m) { return curvature(m, christoffel(m)); }

} // namespace

TEST_CASE("constant-coefficient metrics have literally zero curvature") {
    auto flat = ScenarioRegistry::find("minkowski").instantiate();
    auto b = bundle_for(flat);
    CHECK(b.riemann_is_structurally_zero());
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(b.ricci(i, j).is_zero());
    CHECK(b.scalar().is_zero());

    auto skew = GeneralizedMetric::build({"a", "b"}, {{"2", "1/2"}, {"", "3"}});
    CHECK(bundle_for(skew).riemann_is_structurally_zero());
}

TEST_CASE("unit sphere: Einstein manifold with scalar curvature 2") {
    auto m = ScenarioRegistry::find("sphere2").instantiate();
    auto b = bundle_for(m);
    for (double theta : {0.5, 1.0, 1.9, 2.4}) {
        Bindings bind = m.make_bindings(std::vector<double>{theta, 0.7}, 0.5);
        // ricci = g on the unit sphere.
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(b.ricci(i, j).evaluate(bind) ==
                      doctest::Approx(m.component(i, j).evaluate(bind)).epsilon(1e-12));
        CHECK(b.scalar().evaluate(bind) == doctest::Approx(2.0).epsilon(1e-9));
        // einstein vanishes identically in dimension 2.
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(std::abs(b.einstein(i, j).evaluate(bind)) <= 1e-12);
        // Gaussian curvature 1: R_{theta phi theta}^phi = sin^2 / sin^2 ... = 1
        // in the mixed form evaluated against the metric normalization.
        const double r_mixed = b.riemann(0, 1, 0, 1).evaluate(bind);
        CHECK(std::abs(r_mixed) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("vacuum plane wave: harmonic profile kills the Ricci tensor") {
    auto m = ScenarioRegistry::find("ppwave").instantiate();  // f = x^2 - y^2, harmonic
    auto b = bundle_for(m);
    const double eps = 0.05;
    for (double u : {-0.04, -0.01, 0.0, 0.02, 0.2}) {
        for (double x : {0.6, 1.0, 1.4}) {
            Bindings bind = m.make_bindings(std::vector<double>{u, 0.3, x, 0.9}, eps);
            double scale = 1.0;
            for (int a = 0; a < 4; ++a)
                for (int bb = 0; bb < 4; ++bb)
                    for (int c = 0; c < 4; ++c)
                        for (int d = 0; d < 4; ++d)
                            scale = std::max(scale,
                                             std::abs(b.riemann(a, bb, c, d).evaluate(bind)));
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    CHECK(std::abs(b.ricci(i, j).evaluate(bind)) <= 1e-9 * scale);
        }
    }
}

TEST_CASE("non-vacuum plane wave: uu-Ricci is -(1/2) laplacian(f) delta") {
    auto m = ScenarioRegistry::find("ppwave").with_f("x^2 + y^2").instantiate();
    auto b = bundle_for(m);
    const double eps = 0.05;
    for (double u : {-0.03, 0.0, 0.01, 0.04}) {
        Bindings bind = m.make_bindings(std::vector<double>{u, 0.0, 1.2, 0.8}, eps);
        const double d0 = m.delta()->evaluate(0, u, eps);
        // laplacian(x^2 + y^2) = 4.
        CHECK(b.ricci(0, 0).evaluate(bind) == doctest::Approx(-2.0 * d0).epsilon(1e-10));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                if (i == 0 && j == 0) continue;
                CHECK(std::abs(b.ricci(i, j).evaluate(bind)) <= 1e-12);
            }
        // Scalar curvature vanishes: g^{uu} = 0 kills the only contraction.
        CHECK(std::abs(b.scalar().evaluate(bind)) <= 1e-12);
    }
}

TEST_CASE("ricci and einstein slots are shared symmetric objects") {
    for (const char* name : {"ppwave", "sphere2"}) {
        auto b = bundle_for(ScenarioRegistry::find(name).instantiate());
        const int d = b.dim();
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                CHECK(b.ricci(i, j).same_object(b.ricci(j, i)));
                CHECK(b.einstein(i, j).same_object(b.einstein(j, i)));
            }
    }
}

TEST_CASE("curvature identities hold at sampled points") {
    struct Case {
        const char* name;
        std::vector<std::vector<double>> points;
        double eps;
    };
    const std::vector<Case> cases = {
        {"minkowski", {{0, 0, 0, 0}, {1, 2, 3, 4}}, 0.1},
        {"sphere2",
         {{0.5, 0.1}, {0.9, 2.0}, {1.3, 0.4}, {1.7, 1.1}, {2.1, 2.8}, {2.5, 0.0},
          {0.7, 1.5}, {1.1, 2.2}, {1.9, 0.9}, {2.3, 1.7}},
         0.1},
        {"ppwave", {{0.0, 0.1, 1.0, 1.0}, {0.02, 0.0, 0.8, 1.2}, {-1.0, 0.0, 1.0, 1.0}}, 0.05},
    };
    for (const auto& c : cases) {
        auto m = ScenarioRegistry::find(c.name).instantiate();
        auto b = bundle_for(m);
        auto diag = curvature_diagnostics(b, c.points, c.eps);
        CAPTURE(c.name);
        CHECK_FALSE(diag.contracted_bianchi_skipped);
        CHECK(diag.antisym_first <= 1e-8 * diag.scale);
        CHECK(diag.antisym_second <= 1e-8 * diag.scale);
        CHECK(diag.pair_symmetry <= 1e-8 * diag.scale);
        CHECK(diag.first_bianchi <= 1e-8 * diag.scale);
        CHECK(diag.contracted_bianchi <= 1e-8 * diag.scale);
    }
}

TEST_CASE("mixed Riemann tensor is invariant under constant rescaling of the metric") {
    auto m = ScenarioRegistry::find("sphere2").instantiate();
    auto scaled = GeneralizedMetric::build({"theta", "phi"},
                                           {{"4", "0"}, {"", "4*sin(theta)^2"}});
    auto b0 = bundle_for(m);
    auto b4 = bundle_for(scaled);
    for (double theta : {0.6, 1.2, 2.0}) {
        Bindings bind0 = m.make_bindings(std::vector<double>{theta, 0.5}, 0.5);
        Bindings bind4 = scaled.make_bindings(std::vector<double>{theta, 0.5}, 0.5);
        for (int a = 0; a < 2; ++a)
            for (int bb = 0; bb < 2; ++bb)
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d)
                        CHECK(b0.riemann(a, bb, c, d).evaluate(bind0) ==
                              doctest::Approx(b4.riemann(a, bb, c, d).evaluate(bind4))
                                  .epsilon(1e-9));
    }
}

TEST_CASE("impulsive curvature stays identity-clean inside the window") {
    auto m = ScenarioRegistry::find("ppwave").instantiate();
    auto b = bundle_for(m);
    const double eps = 0.05;
    std::vector<std::vector<double>> points;
    for (double u : {-0.04, -0.02, 0.0, 0.01, 0.03})
        points.push_back({u, 0.0, 1.0 + u, 1.0 - u});
    auto diag = curvature_diagnostics(b, points, eps);
    CHECK(diag.scale > 1.0);  // the impulse is actually visible here
    CHECK(diag.antisym_first <= 1e-8 * diag.scale);
    CHECK(diag.antisym_second <= 1e-8 * diag.scale);
    CHECK(diag.pair_symmetry <= 1e-8 * diag.scale);
    CHECK(diag.first_bianchi <= 1e-8 * diag.scale);
    CHECK(diag.contracted_bianchi <= 1e-8 * diag.scale);
}
