#pragma once
#include <cstddef>
#include <span>
#include <vector>

#include "gengeo/errors.hpp"

namespace gengeo {

// The decreasing sequence of regularization parameters every net is sampled
// on. All asymptotic classifiers in this library are grid-tail heuristics:
// the quantifier "for all small eps" is replaced by "on the last half of the
// grid", and results are evidence, not proofs.
class EpsilonGrid {
public:
    EpsilonGrid() = default;

    explicit EpsilonGrid(std::vector<double> values) : values_(std::move(values)) {
        validate();
    }

    // Geometric sequence from e_max down to e_min, `count` entries.
    static EpsilonGrid geometric(double e_max, double e_min, int count);

    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double smallest() const { return values_.back(); }
    double largest() const { return values_.front(); }

    // Tail = last half of the grid (the asymptotic regime all verdicts use).
    std::span<const double> tail() const {
        const std::size_t start = values_.size() / 2;
        return std::span<const double>(values_).subspan(start);
    }
    std::size_t tail_start() const { return values_.size() / 2; }

private:
    void validate() const;
    std::vector<double> values_;
};

inline void EpsilonGrid::validate() const {
    if (values_.size() < 4)
        throw ConfigError("epsilon grid needs at least 4 entries");
    if (values_.front() > 1.0)
        throw ConfigError("epsilon grid values must lie in (0,1]");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] > 0.0))
            throw ConfigError("epsilon grid values must be positive");
        if (i + 1 < values_.size() && !(values_[i] > values_[i + 1]))
            throw ConfigError("epsilon grid must be strictly decreasing");
    }
}

} // namespace gengeo
