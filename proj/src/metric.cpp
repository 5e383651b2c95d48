#include "gengeo/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace gengeo {

namespace {

constexpr int kMaxDim = 6;  // symbolic cofactor inverses beyond this are hopeless

Eigen::MatrixXd to_eigen(const std::vector<double>& m, int d) {
    Eigen::MatrixXd out(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = m[i * d + j];
    return out;
}

} // namespace

GeneralizedMetric GeneralizedMetric::build(
    std::vector<std::string> coordinates,
    const std::vector<std::vector<std::string>>& component_texts,
    std::map<std::string, double> parameters, std::shared_ptr<const DeltaNet> delta,
    std::string label) {
    const int d = static_cast<int>(coordinates.size());
    if (static_cast<int>(component_texts.size()) != d)
        throw ConfigError("component matrix must be " + std::to_string(d) + "x" +
                          std::to_string(d));
    std::vector<std::vector<Expr>> exprs(d, std::vector<Expr>(d));
    for (int i = 0; i < d; ++i) {
        if (static_cast<int>(component_texts[i].size()) != d)
            throw ConfigError("component matrix row has wrong length");
        for (int j = 0; j < d; ++j) {
            const std::string& text = component_texts[i][j];
            if (text.empty()) continue;
            exprs[i][j] = parse_expr(text);
        }
    }
    // A fully-given matrix must be symmetric as text; otherwise the lower
    // triangle must be empty (upper-triangle form).
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            const std::string& up = component_texts[i][j];
            const std::string& lo = component_texts[j][i];
            if (!lo.empty() && lo != up)
                throw ConfigError("component matrix is not symmetric: [" + std::to_string(i) +
                                  "][" + std::to_string(j) + "] is '" + up + "' but [" +
                                  std::to_string(j) + "][" + std::to_string(i) + "] is '" + lo +
                                  "'");
        }
    }
    return from_exprs(std::move(coordinates), exprs, std::move(parameters), std::move(delta),
                      std::move(label));
}

GeneralizedMetric GeneralizedMetric::from_exprs(std::vector<std::string> coordinates,
                                                const std::vector<std::vector<Expr>>& components,
                                                std::map<std::string, double> parameters,
                                                std::shared_ptr<const DeltaNet> delta,
                                                std::string label) {
    GeneralizedMetric m;
    m.dim_ = static_cast<int>(coordinates.size());
    m.coords_ = std::move(coordinates);
    m.params_ = std::move(parameters);
    m.delta_ = std::move(delta);
    m.label_ = std::move(label);
    if (m.dim_ < 1) throw ConfigError("metric needs at least one coordinate");
    if (m.dim_ > kMaxDim)
        throw ConfigError("metric dimension " + std::to_string(m.dim_) +
                          " exceeds the supported maximum of " + std::to_string(kMaxDim));
    m.comp_.assign(m.dim_ * m.dim_, Expr());
    const Expr zero = Expr::number(0.0);
    for (int i = 0; i < m.dim_; ++i) {
        for (int j = i; j < m.dim_; ++j) {
            Expr e = components[i][j].valid() ? components[i][j] : zero;
            // Mirrored slots share the node: symmetry by construction.
            m.comp_[i * m.dim_ + j] = e;
            m.comp_[j * m.dim_ + i] = e;
        }
    }
    m.finalize();
    return m;
}

void GeneralizedMetric::finalize() {
    bool uses_delta = false;
    for (int i = 0; i < dim_; ++i) {
        for (int j = i; j < dim_; ++j) {
            const Expr& e = component(i, j);
            if (e.references_heaviside_pos())
                throw ConfigError("metric component [" + std::to_string(i) + "][" +
                                  std::to_string(j) +
                                  "] uses a reference-only symbol (heaviside/pos); metric "
                                  "representatives must be smooth per eps");
            uses_delta = uses_delta || e.references_delta();
            for (const auto& v : e.free_variables()) {
                if (std::find(coords_.begin(), coords_.end(), v) == coords_.end() &&
                    !params_.count(v))
                    throw ConfigError("metric component [" + std::to_string(i) + "][" +
                                      std::to_string(j) + "] references unknown identifier '" +
                                      v + "'");
            }
        }
    }
    if (uses_delta && !delta_)
        throw ConfigError("metric uses delta but no delta net was attached");
}

bool GeneralizedMetric::references_delta() const {
    for (const Expr& e : comp_)
        if (e.references_delta()) return true;
    return false;
}

Bindings GeneralizedMetric::make_bindings(std::span<const double> point, double eps) const {
    if (static_cast<int>(point.size()) != dim_)
        throw ConfigError("point dimension does not match metric");
    Bindings b;
    b.eps = eps;
    b.delta = delta_.get();
    for (int i = 0; i < dim_; ++i) b.set(coords_[i], point[i]);
    for (const auto& [k, v] : params_) b.set(k, v);
    return b;
}

MetricEvaluation GeneralizedMetric::evaluate(std::span<const double> point, double eps) const {
    Bindings b = make_bindings(point, eps);
    MetricEvaluation ev;
    ev.point.assign(point.begin(), point.end());
    ev.eps = eps;
    ev.matrix.assign(dim_ * dim_, 0.0);
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) {
            const double v = component(i, j).evaluate(b);
            ev.matrix[i * dim_ + j] = v;
            ev.matrix[j * dim_ + i] = v;
        }
    // Explicit symmetrization is a no-op here (shared nodes) but kept as the
    // documented defense for numerically asymmetric inputs.
    Eigen::MatrixXd g = to_eigen(ev.matrix, dim_);
    g = 0.5 * (g + g.transpose()).eval();
    ev.det = g.determinant();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigenvalue solver failed on metric evaluation");
    ev.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + dim_);
    std::sort(ev.eigenvalues.begin(), ev.eigenvalues.end(), std::greater<double>());
    return ev;
}

FieldNet GeneralizedMetric::det_net() const {
    auto self = *this;  // cheap: shared expression nodes
    return FieldNet(
        dim_,
        [self](double eps, std::span<const double> p) { return self.evaluate(p, eps).det; },
        label_.empty() ? "det" : "det(" + label_ + ")");
}

InvertibilityReport GeneralizedMetric::check_nondegenerate(const Region& region,
                                                           const EpsilonGrid& grid) const {
    return check_invertible_on(det_net(), region, grid);
}

IndexReport GeneralizedMetric::compute_index(const Region& region,
                                             const EpsilonGrid& grid) const {
    IndexReport rep;
    bool first = true;
    int seen_index = -1;
    MetricEvaluation first_eval;
    for (double eps : grid.tail()) {
        int neg_min = dim_ + 1, neg_max = -1;
        double min_abs = std::numeric_limits<double>::infinity();
        region.for_each_point([&](std::span<const double> p) {
            MetricEvaluation ev = evaluate(p, eps);
            int neg = 0;
            for (double lam : ev.eigenvalues) {
                if (lam < 0.0) ++neg;
                min_abs = std::min(min_abs, std::abs(lam));
            }
            neg_min = std::min(neg_min, neg);
            neg_max = std::max(neg_max, neg);
            if (first) {
                first = false;
                seen_index = neg;
                first_eval = ev;
            } else if (neg != seen_index && !rep.witnesses) {
                rep.witnesses = std::make_pair(first_eval, ev);
            }
        });
        rep.per_eps_signatures.emplace_back(eps, neg_min, neg_max);
        rep.min_abs_eigenvalue_table.emplace_back(eps, min_abs);
    }
    rep.stable = !rep.witnesses.has_value();
    for (const auto& [eps, lo, hi] : rep.per_eps_signatures)
        if (lo != hi) rep.stable = false;
    rep.index = rep.stable ? seen_index : -1;
    return rep;
}

std::vector<double> GeneralizedMetric::inverse_at(std::span<const double> point,
                                                  double eps) const {
    MetricEvaluation ev = evaluate(point, eps);
    if (std::abs(ev.det) < 1e-300) {
        std::ostringstream os;
        os << "metric is singular at eps=" << eps << " (|det|=" << std::abs(ev.det) << ")";
        throw NumericalError(os.str());
    }
    const int d = dim_;
    std::vector<double> inv(d * d, 0.0);
    if (d == 1) {
        inv[0] = 1.0 / ev.matrix[0];
        return inv;
    }
    // Cofactor formula g^{ij} = cof(g_ij) / det, mirroring the moderateness
    // argument rather than calling a generic solver.
    Eigen::MatrixXd g = to_eigen(ev.matrix, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            Eigen::MatrixXd minor(d - 1, d - 1);
            for (int r = 0, rr = 0; r < d; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < d; ++c) {
                    if (c == j) continue;
                    minor(rr, cc++) = g(r, c);
                }
                ++rr;
            }
            const double cof = (((i + j) % 2) ? -1.0 : 1.0) * minor.determinant();
            inv[j * d + i] = cof / ev.det;  // adjugate transpose
        }
    }
    return inv;
}

Expr symbolic_det(const std::vector<Expr>& m, int dim) {
    if (dim == 1) return m[0];
    if (dim == 2) return m[0] * m[3] - m[1] * m[2];
    Expr det = Expr::number(0.0);
    for (int j = 0; j < dim; ++j) {
        if (m[j].is_zero()) continue;  // folding shortcut for sparse metrics
        std::vector<Expr> minor;
        minor.reserve((dim - 1) * (dim - 1));
        for (int r = 1; r < dim; ++r)
            for (int c = 0; c < dim; ++c)
                if (c != j) minor.push_back(m[r * dim + c]);
        Expr term = m[j] * symbolic_det(minor, dim - 1);
        det = (j % 2) ? det - term : det + term;
    }
    return det;
}

Expr GeneralizedMetric::det_expr() const {
    if (!det_cache_) det_cache_ = std::make_shared<const Expr>(symbolic_det(comp_, dim_));
    return *det_cache_;
}

const std::vector<Expr>& GeneralizedMetric::inverse_exprs() const {
    if (inverse_cache_) return *inverse_cache_;
    const int d = dim_;
    std::vector<Expr> inv(d * d);
    const Expr det = det_expr();
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            Expr cof;
            if (d == 1) {
                cof = Expr::number(1.0);
            } else {
                std::vector<Expr> minor;
                minor.reserve((d - 1) * (d - 1));
                for (int r = 0; r < d; ++r) {
                    if (r == i) continue;
                    for (int c = 0; c < d; ++c)
                        if (c != j) minor.push_back(comp_[r * d + c]);
                }
                cof = symbolic_det(minor, d - 1);
                if ((i + j) % 2) cof = -cof;
            }
            // Symmetric metric: adjugate is symmetric, share the node.
            Expr entry = cof / det;
            inv[i * d + j] = entry;
            inv[j * d + i] = entry;
        }
    }
    inverse_cache_ = std::make_shared<const std::vector<Expr>>(std::move(inv));
    return *inverse_cache_;
}

GeneralizedMetric GeneralizedMetric::perturbed(const std::vector<std::vector<Expr>>& h,
                                               const std::string& label_suffix) const {
    std::vector<std::vector<Expr>> sum(dim_, std::vector<Expr>(dim_));
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
            sum[i][j] = component(i, j) + h[i][j];
    return from_exprs(coords_, sum, params_, delta_, label_ + label_suffix);
}

} // namespace gengeo
