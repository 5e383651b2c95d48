#include "gengeo/epsilon_grid.hpp"

#include <cmath>

namespace gengeo {

EpsilonGrid EpsilonGrid::geometric(double e_max, double e_min, int count) {
    if (!(e_min > 0.0) || !(e_min < e_max) || !(e_max <= 1.0))
        throw ConfigError("epsilon grid requires 0 < e_min < e_max <= 1");
    if (count < 4) throw ConfigError("epsilon grid needs at least 4 entries");
    const double ratio = std::pow(e_min / e_max, 1.0 / (count - 1));
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) v[i] = e_max * std::pow(ratio, i);
    v.front() = e_max;
    v.back() = e_min;
    return EpsilonGrid(std::move(v));
}

} // namespace gengeo
