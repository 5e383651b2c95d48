#pragma once
#include <array>
#include <functional>
#include <span>
#include <vector>

#include "gengeo/errors.hpp"

namespace gengeo {

// A closed box in R^d, the desk-scale stand-in for the compact sets K of the
// asymptotic estimates. Suprema and infima are taken over a regular lattice
// with a per-axis sample count (default 64); adaptive refinement is out of
// scope by design.
class Region {
public:
    static constexpr int kDefaultSamples = 64;

    Region() = default;

    Region(std::vector<std::array<double, 2>> box, int samples_per_axis = kDefaultSamples)
        : box_(std::move(box)), samples_(box_.size(), samples_per_axis) {
        validate();
    }

    Region(std::vector<std::array<double, 2>> box, std::vector<int> samples_per_axis)
        : box_(std::move(box)), samples_(std::move(samples_per_axis)) {
        validate();
    }

    int dim() const { return static_cast<int>(box_.size()); }
    const std::vector<std::array<double, 2>>& box() const { return box_; }
    const std::vector<int>& samples() const { return samples_; }

    double axis_step(int axis) const {
        const int n = samples_[axis];
        return n > 1 ? (box_[axis][1] - box_[axis][0]) / (n - 1) : 0.0;
    }

    // Visits every lattice point in row-major (last axis fastest) order.
    void for_each_point(const std::function<void(std::span<const double>)>& fn) const {
        std::vector<double> p(box_.size());
        std::vector<int> idx(box_.size(), 0);
        const int d = dim();
        for (;;) {
            for (int a = 0; a < d; ++a) {
                const int n = samples_[a];
                p[a] = n > 1 ? box_[a][0] + idx[a] * axis_step(a)
                             : 0.5 * (box_[a][0] + box_[a][1]);
            }
            fn(p);
            int a = d - 1;
            while (a >= 0 && ++idx[a] == samples_[a]) idx[a--] = 0;
            if (a < 0) break;
        }
    }

    // Sub-box with identical per-axis lattice spacing (used by the
    // monotonicity property of the invertibility test).
    Region sub_box(const std::vector<std::array<double, 2>>& inner) const;

private:
    void validate() const {
        if (box_.empty()) throw ConfigError("region needs at least one interval");
        if (samples_.size() != box_.size())
            throw ConfigError("region needs one sample count per axis");
        for (const auto& iv : box_)
            if (!(iv[0] <= iv[1])) throw ConfigError("region interval is empty");
        for (int n : samples_)
            if (n < 1) throw ConfigError("region sample count must be positive");
    }

    std::vector<std::array<double, 2>> box_;
    std::vector<int> samples_;
};

inline Region Region::sub_box(const std::vector<std::array<double, 2>>& inner) const {
    if (inner.size() != box_.size()) throw ConfigError("sub_box dimension mismatch");
    std::vector<int> counts(inner.size());
    for (std::size_t a = 0; a < inner.size(); ++a) {
        if (inner[a][0] < box_[a][0] || inner[a][1] > box_[a][1])
            throw ConfigError("sub_box exceeds parent region");
        const double step = axis_step(static_cast<int>(a));
        const double len = inner[a][1] - inner[a][0];
        counts[a] = step > 0.0 ? static_cast<int>(len / step) + 1 : 1;
        if (counts[a] < 1) counts[a] = 1;
    }
    return Region(inner, counts);
}

} // namespace gengeo
