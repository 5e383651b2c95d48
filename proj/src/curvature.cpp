#include "gengeo/curvature.hpp"

#include <cmath>

namespace gengeo {

CurvatureBundle curvature(const GeneralizedMetric& m, const ChristoffelField& gamma) {
    const int d = m.dim();
    const auto& coords = m.coordinates();
    CurvatureBundle out;
    out.dim_ = d;
    out.metric_ = m;
    out.gamma_ = gamma;
    out.riemann_.assign(d * d * d * d, Expr());

    // d_a Gamma^k_{ij}, computed once per (a, k, i<=j).
    std::vector<Expr> dgamma(d * d * d * d);
    for (int a = 0; a < d; ++a)
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = i; j < d; ++j) {
                    Expr e = gamma.symbol(k, i, j).is_zero()
                                 ? Expr::number(0.0)
                                 : gamma.symbol(k, i, j).differentiate(coords[a]);
                    dgamma[((a * d + k) * d + i) * d + j] = e;
                    dgamma[((a * d + k) * d + j) * d + i] = e;
                }
    auto dG = [&](int a, int k, int i, int j) -> const Expr& {
        return dgamma[((a * d + k) * d + i) * d + j];
    };

    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            for (int c = 0; c < d; ++c) {
                for (int e_up = 0; e_up < d; ++e_up) {
                    if (a == b) {
                        out.riemann_[((a * d + b) * d + c) * d + e_up] = Expr::number(0.0);
                        continue;
                    }
                    if (a > b) {
                        // Antisymmetry in the first pair: share the negated node.
                        out.riemann_[((a * d + b) * d + c) * d + e_up] =
                            -out.riemann(b, a, c, e_up);
                        continue;
                    }
                    Expr r = dG(a, e_up, b, c) - dG(b, e_up, a, c);
                    for (int e = 0; e < d; ++e) {
                        if (!gamma.symbol(e_up, a, e).is_zero() &&
                            !gamma.symbol(e, b, c).is_zero())
                            r = r + gamma.symbol(e_up, a, e) * gamma.symbol(e, b, c);
                        if (!gamma.symbol(e_up, b, e).is_zero() &&
                            !gamma.symbol(e, a, c).is_zero())
                            r = r - gamma.symbol(e_up, b, e) * gamma.symbol(e, a, c);
                    }
                    out.riemann_[((a * d + b) * d + c) * d + e_up] = r;
                }
            }
        }
    }

    // Ricci: contraction of the first lower index with the upper index,
    // symmetric slots share the node.
    out.ricci_.assign(d * d, Expr());
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            Expr r = Expr::number(0.0);
            for (int c = 0; c < d; ++c) r = r + out.riemann(c, a, b, c);
            out.ricci_[a * d + b] = r;
            out.ricci_[b * d + a] = r;
        }

    const std::vector<Expr>& ginv = m.inverse_exprs();
    Expr s = Expr::number(0.0);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            if (ginv[a * d + b].is_zero() || out.ricci(a, b).is_zero()) continue;
            s = s + ginv[a * d + b] * out.ricci(a, b);
        }
    out.scalar_ = s;

    out.einstein_.assign(d * d, Expr());
    const Expr half = Expr::number(0.5);
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            Expr e = out.ricci(a, b) - half * out.scalar_ * m.component(a, b);
            out.einstein_[a * d + b] = e;
            out.einstein_[b * d + a] = e;
        }
    return out;
}

bool CurvatureBundle::riemann_is_structurally_zero() const {
    for (const Expr& e : riemann_)
        if (!e.is_zero()) return false;
    return true;
}

namespace {

// Covariant divergence of the Einstein tensor, div_b = g^{ac} (d_c G_ab
// - Gamma^e_{ca} G_eb - Gamma^e_{cb} G_ae), built symbolically. Returns
// false when the build would need a third delta derivative.
bool einstein_divergence(const CurvatureBundle& bundle, std::vector<Expr>& out) {
    const GeneralizedMetric& m = bundle.metric();
    const ChristoffelField& gamma = bundle.connection();
    const int d = m.dim();
    const auto& coords = m.coordinates();
    const std::vector<Expr>& ginv = m.inverse_exprs();

    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            if (bundle.einstein(a, b).max_delta_order() >= 2) return false;

    out.assign(d, Expr());
    for (int b = 0; b < d; ++b) {
        Expr div = Expr::number(0.0);
        for (int a = 0; a < d; ++a) {
            for (int c = 0; c < d; ++c) {
                if (ginv[a * d + c].is_zero()) continue;
                Expr nabla = bundle.einstein(a, b).is_zero()
                                 ? Expr::number(0.0)
                                 : bundle.einstein(a, b).differentiate(coords[c]);
                for (int e = 0; e < d; ++e) {
                    if (!gamma.symbol(e, c, a).is_zero() && !bundle.einstein(e, b).is_zero())
                        nabla = nabla - gamma.symbol(e, c, a) * bundle.einstein(e, b);
                    if (!gamma.symbol(e, c, b).is_zero() && !bundle.einstein(a, e).is_zero())
                        nabla = nabla - gamma.symbol(e, c, b) * bundle.einstein(a, e);
                }
                div = div + ginv[a * d + c] * nabla;
            }
        }
        out[b] = div;
    }
    return true;
}

} // namespace

CurvatureDiagnostics curvature_diagnostics(const CurvatureBundle& bundle,
                                           const std::vector<std::vector<double>>& points,
                                           double eps) {
    const GeneralizedMetric& m = bundle.metric();
    const int d = m.dim();
    CurvatureDiagnostics diag;

    std::vector<Expr> div;
    const bool have_div = einstein_divergence(bundle, div);
    diag.contracted_bianchi_skipped = !have_div;

    std::vector<double> rup(d * d * d * d), rlow(d * d * d * d);
    for (const auto& p : points) {
        Bindings b = m.make_bindings(p, eps);
        MetricEvaluation ev = m.evaluate(p, eps);
        for (int a = 0; a < d; ++a)
            for (int bb = 0; bb < d; ++bb)
                for (int c = 0; c < d; ++c)
                    for (int e = 0; e < d; ++e)
                        rup[((a * d + bb) * d + c) * d + e] =
                            bundle.riemann(a, bb, c, e).evaluate(b);
        // Lower the last index with the evaluated metric.
        for (int a = 0; a < d; ++a)
            for (int bb = 0; bb < d; ++bb)
                for (int c = 0; c < d; ++c)
                    for (int e = 0; e < d; ++e) {
                        double v = 0.0;
                        for (int f = 0; f < d; ++f)
                            v += rup[((a * d + bb) * d + c) * d + f] * ev.at(f, e, d);
                        rlow[((a * d + bb) * d + c) * d + e] = v;
                    }
        auto R = [&](int a, int bb, int c, int e) {
            return rlow[((a * d + bb) * d + c) * d + e];
        };
        for (int a = 0; a < d; ++a)
            for (int bb = 0; bb < d; ++bb)
                for (int c = 0; c < d; ++c)
                    for (int e = 0; e < d; ++e) {
                        const double v = R(a, bb, c, e);
                        diag.scale = std::max(diag.scale, std::abs(v));
                        diag.antisym_first =
                            std::max(diag.antisym_first, std::abs(v + R(bb, a, c, e)));
                        diag.antisym_second =
                            std::max(diag.antisym_second, std::abs(v + R(a, bb, e, c)));
                        diag.pair_symmetry =
                            std::max(diag.pair_symmetry, std::abs(v - R(c, e, a, bb)));
                        diag.first_bianchi = std::max(
                            diag.first_bianchi,
                            std::abs(v + R(bb, c, a, e) + R(c, a, bb, e)));
                    }
        if (have_div)
            for (int bb = 0; bb < d; ++bb)
                diag.contracted_bianchi =
                    std::max(diag.contracted_bianchi, std::abs(div[bb].evaluate(b)));
    }
    return diag;
}

} // namespace gengeo
