#pragma once
#include <vector>

#include "gengeo/christoffel.hpp"
#include "gengeo/metric.hpp"

namespace gengeo {

// Riemann, Ricci, scalar and Einstein curvature as exact symbolic fields.
//
// Sign convention: the coordinate Riemann tensor is
//   R_{abc}^d = d_a Gamma^d_{bc} - d_b Gamma^d_{ac}
//               + Gamma^d_{ae} Gamma^e_{bc} - Gamma^d_{be} Gamma^e_{ac}
// with Ricci the contraction of the first lower index against the upper
// one, R_ab = R_{cab}^c. The overall sign is pinned by requiring the unit
// 2-sphere to have scalar curvature +2 (checked by the acceptance suite);
// the abstract operator definition alone leaves this sign convention-
// dependent, see README.
class CurvatureBundle {
public:
    CurvatureBundle() = default;

    int dim() const { return dim_; }
    const GeneralizedMetric& metric() const { return metric_; }
    const ChristoffelField& connection() const { return gamma_; }

    // Index order [a][b][c][d_up].
    const Expr& riemann(int a, int b, int c, int d) const {
        return riemann_[((a * dim_ + b) * dim_ + c) * dim_ + d];
    }
    const Expr& ricci(int a, int b) const { return ricci_[a * dim_ + b]; }
    const Expr& scalar() const { return scalar_; }
    const Expr& einstein(int a, int b) const { return einstein_[a * dim_ + b]; }

    // True when every Riemann component folded to the literal zero.
    bool riemann_is_structurally_zero() const;

private:
    friend CurvatureBundle curvature(const GeneralizedMetric& m, const ChristoffelField& gamma);
    int dim_ = 0;
    GeneralizedMetric metric_;
    ChristoffelField gamma_;
    std::vector<Expr> riemann_;
    std::vector<Expr> ricci_;
    Expr scalar_;
    std::vector<Expr> einstein_;
};

CurvatureBundle curvature(const GeneralizedMetric& m, const ChristoffelField& gamma);

struct CurvatureDiagnostics {
    double antisym_first = 0.0;     // R_abcd + R_bacd
    double antisym_second = 0.0;    // R_abcd + R_abdc
    double pair_symmetry = 0.0;     // R_abcd - R_cdab
    double first_bianchi = 0.0;     // cyclic sum over the first three indices
    double contracted_bianchi = 0.0;  // div G (symbolic divergence, evaluated)
    bool contracted_bianchi_skipped = false;  // would need delta order 3
    double scale = 1.0;             // max |R_abcd| over the points
};

// Evaluates the classical identities at each point; the fully lowered
// R_abcd is formed numerically at the point (lowering with the evaluated
// metric) to avoid quartic expression swell.
CurvatureDiagnostics curvature_diagnostics(const CurvatureBundle& bundle,
                                           const std::vector<std::vector<double>>& points,
                                           double eps);

} // namespace gengeo
