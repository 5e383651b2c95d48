#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gengeo/epsilon_grid.hpp"
#include "gengeo/nets.hpp"
#include "gengeo/region.hpp"

namespace gengeo {

// Exponent search range for strict-nonzero / invertibility witnesses.
// Beyond eps^32 on grids reaching 1e-3 double precision is exhausted.
inline constexpr int kMaxExponent = 32;

// Log-log fit thresholds used by the growth verdict.
inline constexpr double kModerateOrderCap = 32.0;
inline constexpr double kModerateResidualCap = 0.2;

enum class GrowthVerdict { ModerateLike, NegligibleLike, Inconclusive };

const char* to_string(GrowthVerdict v);

struct GrowthReport {
    double estimated_order = 0.0;   // N in sup ~ eps^(-N), least squares over the grid
    double fit_residual = 0.0;      // rms deviation in log-log
    std::vector<std::pair<double, double>> per_eps_sup;  // (eps, sup)
    GrowthVerdict verdict = GrowthVerdict::Inconclusive;
    double tail_decay_exponent = 0.0;  // slope of decay on the grid tail
    int negligible_order = 0;          // largest integer m <= kMaxExponent with tail decay >= m

    // Grid evidence that the net decays at least like eps^m.
    bool negligible_like(int m) const { return tail_decay_exponent >= static_cast<double>(m); }
};

GrowthReport estimate_growth_order(const ScalarNet& net, const EpsilonGrid& grid);
GrowthReport estimate_growth_order(const FieldNet& net, const Region& region,
                                   const EpsilonGrid& grid);

struct StrictNonzeroResult {
    bool decision = false;
    std::optional<int> witness_exponent;  // smallest m in 0..32 with |r_eps| >= eps^m on the tail
    std::vector<std::pair<double, double>> tail_values;  // (eps, |r_eps|)
};

StrictNonzeroResult is_strictly_nonzero(const ScalarNet& net, const EpsilonGrid& grid);

struct InvertibilityReport {
    bool decision = false;
    std::optional<int> exponent;       // smallest q with inf >= eps^q on the tail
    std::vector<double> worst_point;   // argmin of |u_eps| at the smallest eps
    std::vector<std::pair<double, double>> inf_table;  // (eps, inf over region)
    std::string label;
};

// Uniform strict nonzeroness on the region: the invertibility test.
InvertibilityReport check_invertible_on(const FieldNet& field, const Region& region,
                                        const EpsilonGrid& grid);

} // namespace gengeo
