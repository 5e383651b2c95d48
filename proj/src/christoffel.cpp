#include "gengeo/christoffel.hpp"

#include <cmath>

namespace gengeo {

ChristoffelField christoffel(const GeneralizedMetric& m) {
    const int d = m.dim();
    const auto& coords = m.coordinates();
    const std::vector<Expr>& ginv = m.inverse_exprs();

    // Exact partials of every component, computed once.
    std::vector<Expr> dg(d * d * d);  // dg[a][i][j] = d g_ij / dx^a
    for (int a = 0; a < d; ++a)
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                Expr e = m.component(i, j).differentiate(coords[a]);
                dg[(a * d + i) * d + j] = e;
                dg[(a * d + j) * d + i] = e;
            }
    auto dgat = [&](int a, int i, int j) -> const Expr& { return dg[(a * d + i) * d + j]; };

    ChristoffelField out;
    out.dim_ = d;
    out.metric_ = m;
    out.sym_.assign(d * d * d, Expr());
    const Expr half = Expr::number(0.5);
    for (int k = 0; k < d; ++k) {
        for (int i = 0; i < d; ++i) {
            for (int j = i; j < d; ++j) {
                Expr sum = Expr::number(0.0);
                for (int mm = 0; mm < d; ++mm) {
                    const Expr& gkm = ginv[k * d + mm];
                    if (gkm.is_zero()) continue;
                    Expr bracket = dgat(i, j, mm) + dgat(j, i, mm) - dgat(mm, i, j);
                    sum = sum + gkm * bracket;
                }
                Expr val = half * sum;
                out.sym_[(k * d + i) * d + j] = val;
                out.sym_[(k * d + j) * d + i] = val;  // lower-index symmetry, shared node
            }
        }
    }
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (!out.symbol(k, i, j).is_zero()) out.nonzero_.push_back({k, i, j});
    return out;
}

VectorField covariant_derivative(const ChristoffelField& gamma, const VectorField& xi,
                                 int direction) {
    const int d = gamma.dim();
    if (static_cast<int>(xi.comp.size()) != d)
        throw ConfigError("vector field dimension does not match connection");
    const auto& coords = gamma.metric().coordinates();
    VectorField out;
    out.comp.resize(d);
    for (int k = 0; k < d; ++k) {
        Expr e = xi.comp[k].differentiate(coords[direction]);
        for (int j = 0; j < d; ++j) {
            const Expr& g = gamma.symbol(k, direction, j);
            if (g.is_zero() || xi.comp[j].is_zero()) continue;
            e = e + g * xi.comp[j];
        }
        out.comp[k] = e;
    }
    return out;
}

namespace {

// D_xi eta with general xi: xi^i (d eta^k/dx^i + Gamma^k_{ij} eta^j).
VectorField connection_apply(const ChristoffelField& gamma, const VectorField& xi,
                             const VectorField& eta) {
    const int d = gamma.dim();
    VectorField out;
    out.comp.assign(d, Expr::number(0.0));
    for (int i = 0; i < d; ++i) {
        if (xi.comp[i].is_zero()) continue;
        VectorField di = covariant_derivative(gamma, eta, i);
        for (int k = 0; k < d; ++k) out.comp[k] = out.comp[k] + xi.comp[i] * di.comp[k];
    }
    return out;
}

Expr metric_pairing(const GeneralizedMetric& m, const VectorField& a, const VectorField& b) {
    const int d = m.dim();
    Expr out = Expr::number(0.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (a.comp[i].is_zero() || b.comp[j].is_zero() || m.component(i, j).is_zero())
                continue;
            out = out + m.component(i, j) * a.comp[i] * b.comp[j];
        }
    return out;
}

Expr directional(const GeneralizedMetric& m, const VectorField& xi, const Expr& scalar) {
    Expr out = Expr::number(0.0);
    for (int i = 0; i < m.dim(); ++i) {
        if (xi.comp[i].is_zero()) continue;
        out = out + xi.comp[i] * scalar.differentiate(m.coordinates()[i]);
    }
    return out;
}

VectorField lie_bracket(const GeneralizedMetric& m, const VectorField& a,
                        const VectorField& b) {
    const int d = m.dim();
    VectorField out;
    out.comp.assign(d, Expr::number(0.0));
    for (int k = 0; k < d; ++k) {
        Expr e = Expr::number(0.0);
        for (int i = 0; i < d; ++i) {
            if (!a.comp[i].is_zero())
                e = e + a.comp[i] * b.comp[k].differentiate(m.coordinates()[i]);
            if (!b.comp[i].is_zero())
                e = e - b.comp[i] * a.comp[k].differentiate(m.coordinates()[i]);
        }
        out.comp[k] = e;
    }
    return out;
}

} // namespace

KoszulResult koszul_residual(const ChristoffelField& gamma, const VectorField& xi,
                             const VectorField& eta, const VectorField& zeta,
                             const std::vector<std::vector<double>>& points, double eps) {
    const GeneralizedMetric& m = gamma.metric();
    const Expr lhs = Expr::number(2.0) * metric_pairing(m, connection_apply(gamma, xi, eta), zeta);
    const Expr rhs = directional(m, xi, metric_pairing(m, eta, zeta)) +
                     directional(m, eta, metric_pairing(m, zeta, xi)) -
                     directional(m, zeta, metric_pairing(m, xi, eta)) -
                     metric_pairing(m, xi, lie_bracket(m, eta, zeta)) +
                     metric_pairing(m, eta, lie_bracket(m, zeta, xi)) +
                     metric_pairing(m, zeta, lie_bracket(m, xi, eta));
    KoszulResult res;
    res.scale = 1.0;
    for (const auto& p : points) {
        Bindings b = m.make_bindings(p, eps);
        const double l = lhs.evaluate(b);
        const double r = rhs.evaluate(b);
        res.max_residual = std::max(res.max_residual, std::abs(l - r));
        res.scale = std::max({res.scale, std::abs(l), std::abs(r)});
    }
    return res;
}

std::vector<std::vector<double>> along_curve_derivative(
    const ChristoffelField& gamma, std::span<const double> t_grid,
    const std::vector<std::vector<double>>& positions,
    const std::vector<std::vector<double>>& velocities,
    const std::vector<std::vector<double>>& xi_samples, double eps) {
    const std::size_t n = t_grid.size();
    const int d = gamma.dim();
    if (n < 5) throw ConfigError("along_curve_derivative needs at least 5 samples");
    if (positions.size() != n || velocities.size() != n || xi_samples.size() != n)
        throw ConfigError("curve sample arrays are not congruent");
    const double h = t_grid[1] - t_grid[0];
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (std::abs((t_grid[i + 1] - t_grid[i]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw ConfigError("along_curve_derivative requires a uniform t-grid");

    // 4th-order d/dt: central 5-point stencil in the interior, one-sided at
    // the ends.
    auto ddt = [&](int k, std::size_t i) {
        auto f = [&](std::size_t j) { return xi_samples[j][k]; };
        if (i >= 2 && i + 2 < n)
            return (-f(i + 2) + 8.0 * f(i + 1) - 8.0 * f(i - 1) + f(i - 2)) / (12.0 * h);
        if (i < 2)
            return (-25.0 * f(i) + 48.0 * f(i + 1) - 36.0 * f(i + 2) + 16.0 * f(i + 3) -
                    3.0 * f(i + 4)) /
                   (12.0 * h);
        return (25.0 * f(i) - 48.0 * f(i - 1) + 36.0 * f(i - 2) - 16.0 * f(i - 3) +
                3.0 * f(i - 4)) /
               (12.0 * h);
    };

    std::vector<std::vector<double>> out(n, std::vector<double>(d, 0.0));
    Bindings b = gamma.metric().make_bindings(std::vector<double>(d, 0.0), eps);
    for (std::size_t i = 0; i < n; ++i) {
        b.assign_front(positions[i]);
        for (int k = 0; k < d; ++k) {
            double v = ddt(k, i);
            for (const auto& [kk, ii, jj] : gamma.nonzero()) {
                if (kk != k) continue;
                v += gamma.symbol(kk, ii, jj).evaluate(b) * velocities[i][ii] *
                     xi_samples[i][jj];
            }
            out[i][k] = v;
        }
    }
    return out;
}

} // namespace gengeo
