#include <doctest.h>

#include <cmath>
#include <random>

#include "gengeo/delta_net.hpp"
#include "gengeo/expr.hpp"
#include "gengeo/quadrature.hpp"

using namespace gengeo;

namespace {

// Independent quadrature for the oracle values: composite Simpson on a fine
// grid, nothing shared with the library's Gauss-Kronrod path.
double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

double eval(const std::string& text, const Bindings& b) { return parse_expr(text).evaluate(b); }

} // namespace

TEST_CASE("parser builds standard precedence") {
    Bindings b;
    b.set("x", 3.0);
    b.set("y", 2.0);
    CHECK(eval("x^2 - y^2", b) == doctest::Approx(5.0));
    CHECK(eval("2 + 3*4", b) == doctest::Approx(14.0));
    CHECK(eval("2^3^2", b) == doctest::Approx(512.0));       // right-assoc
    CHECK(eval("-x^2", b) == doctest::Approx(-9.0));         // ^ binds tighter than unary -
    CHECK(eval("(-x)^2", b) == doctest::Approx(9.0));
    CHECK(eval("x^-1", b) == doctest::Approx(1.0 / 3.0));
    CHECK(eval("2*-3", b) == doctest::Approx(-6.0));
    CHECK(eval("x - y - 1", b) == doctest::Approx(0.0));     // left-assoc
    CHECK(eval("12/y/y", b) == doctest::Approx(3.0));
    CHECK(eval("1e-2 + 1.5E2", b) == doctest::Approx(150.01));
}

TEST_CASE("parser builds the documented tree shapes") {
    Expr e = parse_expr("x^2 - y^2");
    CHECK(e.node()->kind == ExprKind::Sub);
    CHECK(e.node()->a->kind == ExprKind::Pow);

    Expr f = parse_expr("f0*delta(u)");
    CHECK(f.node()->kind == ExprKind::Mul);
    CHECK(f.node()->a->name == "f0");
    CHECK(f.node()->b->kind == ExprKind::Call);
    CHECK(f.node()->b->func == Func::Delta);
    CHECK(f.free_variables() == std::set<std::string>{"f0", "u"});
}

TEST_CASE("parser rejects bad input") {
    CHECK_THROWS_AS(parse_expr(""), ConfigError);
    CHECK_THROWS_AS(parse_expr("x +"), ConfigError);
    CHECK_THROWS_AS(parse_expr("(x"), ConfigError);
    CHECK_THROWS_AS(parse_expr("foo(x)"), ConfigError);   // unknown function
    CHECK_THROWS_AS(parse_expr("sin x"), ConfigError);    // reserved name needs '('
    CHECK_THROWS_AS(parse_expr("x 2"), ConfigError);
}

TEST_CASE("nested singular composition is rejected") {
    CHECK_THROWS_AS(parse_expr("delta(delta(u))"), ConfigError);
    CHECK_THROWS_AS(parse_expr("delta1(heaviside(u))"), ConfigError);
    CHECK_THROWS_AS(parse_expr("delta(u + pos(u))"), ConfigError);
    CHECK_NOTHROW(parse_expr("delta(u) * heaviside(u)"));  // side by side is fine
    CHECK_NOTHROW(parse_expr("heaviside(u)*u"));
}

TEST_CASE("symbolic differentiation basics") {
    Bindings b;
    b.set("x", 0.7);
    b.set("y", -0.3);
    CHECK(parse_expr("x^2 - y^2").differentiate("x").evaluate(b) == doctest::Approx(1.4));
    // chain rule: d/dx sin(x*y) = y cos(x*y)
    const double want = -0.3 * std::cos(0.7 * -0.3);
    CHECK(parse_expr("sin(x*y)").differentiate("x").evaluate(b) == doctest::Approx(want));
    // linearity on delta: d/du (f0 delta(u)) = f0 delta1(u)
    Expr d = parse_expr("f0*delta(u)").differentiate("u");
    CHECK(d.to_string().find("delta1") != std::string::npos);
}

TEST_CASE("differentiation respects the delta-order cap and reference-only symbols") {
    Expr d2 = parse_expr("delta(u)").differentiate("u").differentiate("u");
    CHECK(d2.max_delta_order() == 2);
    CHECK_THROWS_AS(d2.differentiate("u"), ConfigError);
    CHECK_THROWS_AS(parse_expr("heaviside(u)").differentiate("u"), ConfigError);
    CHECK_THROWS_AS(parse_expr("pos(u)").differentiate("u"), ConfigError);
    // Differentiating w.r.t. an unrelated variable folds to zero before the cap.
    CHECK(d2.differentiate("x").is_zero());
}

TEST_CASE("derivatives agree with central finite differences at random points") {
    const char* exprs[] = {"x^2*y + y^3",      "sin(x*y) + cos(x)", "exp(x/2) * tanh(y)",
                           "sqrt(x + 3)",      "log(x + 4)/y",      "x^5 - 2*x*y + 1",
                           "(x + y)^3 / (2 + x^2)"};
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (const char* text : exprs) {
        Expr e = parse_expr(text);
        Expr dx = e.differentiate("x");
        for (int trial = 0; trial < 20; ++trial) {
            Bindings b;
            b.set("x", dist(rng));
            b.set("y", 0.5 + dist(rng) * 0.4);
            const double h = 1e-5;
            Bindings bp = b, bm = b;
            bp.values[0] += h;
            bm.values[0] -= h;
            const double fd = (e.evaluate(bp) - e.evaluate(bm)) / (2 * h);
            const double ex = dx.evaluate(b);
            CHECK(std::abs(fd - ex) <= 1e-6 * (1.0 + std::abs(ex)));
        }
    }
}

TEST_CASE("evaluation error paths carry a binding snapshot") {
    Bindings b;
    b.set("x", 0.0);
    CHECK_THROWS_AS(eval("1/x", b), EvalError);
    CHECK_THROWS_AS(eval("log(x)", b), EvalError);
    CHECK_THROWS_AS(eval("sqrt(x - 1)", b), EvalError);
    CHECK_THROWS_AS(eval("y + 1", b), EvalError);  // unbound
    try {
        eval("1/x", b);
    } catch (const EvalError& e) {
        CHECK(std::string(e.what()).find("x=0") != std::string::npos);
    }
}

TEST_CASE("bump delta evaluates to the quadrature-normalized value") {
    // Oracle: C = 1 / integral of exp(-1/(1-s^2)) over (-1,1), by Simpson.
    const double i_beta = simpson(
        [](double s) {
            const double w = 1.0 - s * s;
            return w > 0.0 ? std::exp(-1.0 / w) : 0.0;
        },
        -1.0, 1.0);
    const double c = 1.0 / i_beta;

    auto net = DeltaNet(DeltaProfile::bump());
    Bindings b;
    b.eps = 0.1;
    b.delta = &net;
    b.set("u", 0.0);
    const double want = c * std::exp(-1.0) / 0.1;
    CHECK(eval("delta(u)", b) == doctest::Approx(want).epsilon(1e-9));

    // Outside the support: u = 2 eps.
    b.set("u", 0.2);
    CHECK(eval("delta(u)", b) == 0.0);

    // x^2 - y^2 at (1,1) is exactly 0.
    Bindings b2;
    b2.set("x", 1.0);
    b2.set("y", 1.0);
    CHECK(eval("x^2 - y^2", b2) == 0.0);
}

TEST_CASE("evaluation is deterministic bit for bit") {
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
    CHECK(std::memcmp(&v1, &v2, sizeof v1) == 0);
}

TEST_CASE("delta moment identities per grid eps") {
    auto net = std::make_shared<DeltaNet>(DeltaProfile::bump());
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);
    for (double eps : grid.values()) {
        const double r = net->radius(eps);
        // integral of delta = 1 to 1e-8
        const double i0 = simpson([&](double u) { return net->evaluate(0, u, eps); }, -r, r);
        CHECK(i0 == doctest::Approx(1.0).epsilon(1e-8));
        // integral of delta1 = 0 and integral of u*delta1 = -1 to 1e-6
        const double i1 = simpson([&](double u) { return net->evaluate(1, u, eps); }, -r, r);
        CHECK(std::abs(i1) < 1e-6);
        const double i2 =
            simpson([&](double u) { return u * net->evaluate(1, u, eps); }, -r, r);
        CHECK(i2 == doctest::Approx(-1.0).epsilon(1e-6));
    }
}

TEST_CASE("strict delta net validation") {
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.0125, 5);

    auto bump = DeltaNet(DeltaProfile::bump());
    auto rep = validate_strict_delta_net(bump, grid);
    CHECK(rep.pass());
    for (const auto& row : rep.rows) {
        CHECK(row.integral == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(row.l1 == doctest::Approx(1.0).epsilon(1e-8));
    }

    // Signed profile: integral 1 but L1 norm 3 (independent quadrature).
    auto signed_net = DeltaNet(DeltaProfile::signed_split());
    auto rep2 = validate_strict_delta_net(signed_net, grid);
    CHECK(rep2.pass());
    CHECK(rep2.l1_bound == doctest::Approx(3.0).epsilon(1e-8));
    const double l1_oracle =
        simpson([&](double u) { return std::abs(signed_net.evaluate(0, u, 0.1)); }, -0.1, 0.1,
                40000);
    CHECK(l1_oracle == doctest::Approx(3.0).epsilon(1e-6));

    // Constant radius rule: support does not shrink.
    auto stuck = DeltaNet(DeltaProfile::bump(), "0.5");
    CHECK_FALSE(validate_strict_delta_net(stuck, grid).pass());
    CHECK_FALSE(validate_strict_delta_net(stuck, grid).radius_shrinks);
}

TEST_CASE("gaussian-truncated profile differs from bump at the peak") {
    auto bump = DeltaNet(DeltaProfile::bump());
    auto gauss = DeltaNet(DeltaProfile::gaussian_truncated());
    const double pb = bump.evaluate(0, 0.0, 0.1);
    const double pg = gauss.evaluate(0, 0.0, 0.1);
    CHECK(pb > 0.0);
    CHECK(pg > 0.0);
    CHECK(pb != doctest::Approx(pg).epsilon(1e-3));
    // Profile is C2 at the cut: value and first two derivatives vanish there.
    CHECK(gauss.profile().value(0.999999) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(gauss.profile().d1(0.999999) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(std::abs(gauss.profile().d2(0.999999)) < 1e-3);
}

TEST_CASE("custom profile expressions work end to end") {
    // Parabolic (Epanechnikov) profile: C2 requirement is on the open
    // support; normalization handled at construction.
    auto prof = DeltaProfile::named("(1 - s^2)^3");
    auto net = DeltaNet(prof);
    EpsilonGrid grid = EpsilonGrid::geometric(0.2, 0.025, 4);
    CHECK(validate_strict_delta_net(net, grid).pass());
}
