#include <doctest.h>

#include <cmath>

#include "gengeo/asymptotics.hpp"

using namespace gengeo;

TEST_CASE("geometric grid construction") {
    EpsilonGrid g = EpsilonGrid::geometric(0.1, 0.0125, 4);
    REQUIRE(g.size() == 4);
    CHECK(g[0] == doctest::Approx(0.1));
    CHECK(g[1] == doctest::Approx(0.05));
    CHECK(g[2] == doctest::Approx(0.025));
    CHECK(g[3] == doctest::Approx(0.0125));

    CHECK_THROWS_AS(EpsilonGrid::geometric(1.0, 1.0, 4), ConfigError);
    CHECK_THROWS_AS(EpsilonGrid::geometric(0.5, 0.1, 3), ConfigError);
    CHECK_THROWS_AS(EpsilonGrid::geometric(1.5, 0.1, 5), ConfigError);

    // Ratio (e_min/e_max)^(1/(count-1)) = 0.5 for this input.
    EpsilonGrid g6 = EpsilonGrid::geometric(0.2, 0.00625, 6);
    REQUIRE(g6.size() == 6);
    for (std::size_t i = 0; i + 1 < g6.size(); ++i)
        CHECK(g6[i + 1] / g6[i] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("growth order of exact power laws") {
    EpsilonGrid grid = EpsilonGrid::geometric(0.5, 0.005, 8);

    ScalarNet pow2{[](double e) { return std::pow(e, -2.0); }, "eps^-2"};
    GrowthReport r = estimate_growth_order(pow2, grid);
    CHECK(r.estimated_order == doctest::Approx(2.0).epsilon(0.05));
    CHECK(r.verdict == GrowthVerdict::ModerateLike);

    ScalarNet one{[](double) { return 1.0; }, "1"};
    GrowthReport r1 = estimate_growth_order(one, grid);
    CHECK(r1.estimated_order == doctest::Approx(0.0).epsilon(0.05));
    CHECK(r1.verdict == GrowthVerdict::ModerateLike);

    // exp(-1/eps) decays faster than every tested power.
    ScalarNet fast{[](double e) { return std::exp(-1.0 / e); }, "exp(-1/eps)"};
    GrowthReport rf = estimate_growth_order(fast, grid);
    CHECK(rf.verdict == GrowthVerdict::NegligibleLike);
    for (int m = 1; m <= 10; ++m) CHECK(rf.negligible_like(m));
}

TEST_CASE("growth order recovery property for k in 0..3") {
    EpsilonGrid grid = EpsilonGrid::geometric(0.3, 0.002, 7);
    for (int k = 0; k <= 3; ++k) {
        ScalarNet net{[k](double e) { return std::pow(e, -static_cast<double>(k)); }, "pow"};
        GrowthReport r = estimate_growth_order(net, grid);
        CHECK(r.estimated_order == doctest::Approx(static_cast<double>(k)).epsilon(0.05));
    }
}

TEST_CASE("growth order propagates sampler failures") {
    EpsilonGrid grid = EpsilonGrid::geometric(0.5, 0.05, 4);
    ScalarNet bad{[](double e) { return e < 0.1 ? std::nan("") : 1.0; }, "bad"};
    CHECK_THROWS_AS(estimate_growth_order(bad, grid), EvalError);
}

TEST_CASE("strictly nonzero classification") {
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);

    ScalarNet id{[](double e) { return e; }, "eps"};
    auto r = is_strictly_nonzero(id, grid);
    CHECK(r.decision);
    CHECK(r.witness_exponent == 1);

    ScalarNet c3{[](double) { return 3.0; }, "3"};
    auto r3 = is_strictly_nonzero(c3, grid);
    CHECK(r3.decision);
    CHECK(r3.witness_exponent == 0);

    // eps^(1/(2 eps^2)) beats every power: not strictly nonzero.
    ScalarNet steep{[](double e) { return std::pow(e, 1.0 / (2.0 * e * e)); }, "steep"};
    auto rs = is_strictly_nonzero(steep, grid);
    CHECK_FALSE(rs.decision);
    CHECK_FALSE(rs.witness_exponent.has_value());
}

TEST_CASE("scaling leaves the strictly-nonzero decision invariant") {
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);
    const double scales[] = {0.03, 0.5, 2.0, 40.0, -7.0};
    auto base = [](double e) { return e * e; };
    auto r0 = is_strictly_nonzero(ScalarNet{base, "base"}, grid);
    for (double c : scales) {
        auto rc = is_strictly_nonzero(ScalarNet{[=](double e) { return c * base(e); }, "c"},
                                      grid);
        CHECK(rc.decision == r0.decision);
    }
    // Same for a net that fails.
    auto fail_base = [](double e) { return std::pow(e, 1.0 / e); };
    for (double c : scales) {
        auto rc = is_strictly_nonzero(
            ScalarNet{[=](double e) { return c * fail_base(e); }, "cf"}, grid);
        CHECK_FALSE(rc.decision);
    }
}

namespace {

// The counterexample field u_eps(x) = eps^(x^2/(x^4+eps^4)): pointwise
// strictly nonzero, not uniformly so on [0,1].
FieldNet example24_field() {
    return FieldNet::from_expr(parse_expr("eps^(x^2/(x^4 + eps^4))"), {"x"}, {}, nullptr,
                               "example24");
}

} // namespace

TEST_CASE("uniform invertibility: smooth perturbation of 1") {
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);
    FieldNet f = FieldNet::from_expr(parse_expr("1 + eps*x"), {"x"}, {}, nullptr, "1+eps*x");
    Region region({{0.0, 1.0}});
    auto rep = check_invertible_on(f, region, grid);
    CHECK(rep.decision);
    CHECK(rep.exponent == 0);
}

TEST_CASE("uniform invertibility fails for the counterexample field") {
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);
    Region region({{0.0, 1.0}});
    auto rep = check_invertible_on(example24_field(), region, grid);
    CHECK_FALSE(rep.decision);
    // Worst point within 2 lattice cells of x = eps at the smallest eps.
    const double cell = region.axis_step(0);
    REQUIRE(rep.worst_point.size() == 1);
    CHECK(std::abs(rep.worst_point[0] - grid.smallest()) <= 2.0 * cell);
}

TEST_CASE("pointwise evaluation of the counterexample is strictly nonzero") {
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);
    FieldNet f = example24_field();
    const struct {
        double x0;
        int m;
    } cases[] = {{0.25, 16}, {0.5, 4}, {1.0, 1}};
    for (const auto& c : cases) {
        ScalarNet at_point{[&f, x0 = c.x0](double e) {
                               const double p[1] = {x0};
                               return f.sample(e, p);
                           },
                           "u(x0)"};
        auto r = is_strictly_nonzero(at_point, grid);
        CHECK(r.decision);
        REQUIRE(r.witness_exponent.has_value());
        CHECK(std::abs(*r.witness_exponent - c.m) <= 1);
    }
}

TEST_CASE("invertibility on a region implies strict nonzeroness at sampled points") {
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);
    FieldNet f =
        FieldNet::from_expr(parse_expr("2 + sin(x)*eps"), {"x"}, {}, nullptr, "2+sin*eps");
    Region region({{-1.0, 1.0}}, 17);
    auto rep = check_invertible_on(f, region, grid);
    REQUIRE(rep.decision);
    region.for_each_point([&](std::span<const double> p) {
        std::vector<double> pt(p.begin(), p.end());
        ScalarNet at{[&f, pt](double e) { return f.sample(e, pt); }, "at"};
        CHECK(is_strictly_nonzero(at, grid).decision);
    });
}

TEST_CASE("invertibility is monotone under shrinking the region") {
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);
    FieldNet f = FieldNet::from_expr(parse_expr("x^2 + eps"), {"x"}, {}, nullptr, "x^2+eps");
    Region big({{-1.0, 1.0}}, 65);
    auto rep_big = check_invertible_on(f, big, grid);
    REQUIRE(rep_big.decision);
    Region small = big.sub_box({{0.25, 0.75}});
    auto rep_small = check_invertible_on(f, small, grid);
    CHECK(rep_small.decision);
    CHECK(*rep_small.exponent <= *rep_big.exponent);
}
