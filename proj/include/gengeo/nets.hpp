#pragma once
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gengeo/delta_net.hpp"
#include "gengeo/expr.hpp"

namespace gengeo {

// A net of numbers: a rule eps -> value, never a stored array. Classifiers
// sample it on a caller-supplied grid.
struct ScalarNet {
    std::function<double(double)> sample;
    std::string label;

    static ScalarNet from_expr(const Expr& e, std::shared_ptr<const DeltaNet> net = nullptr,
                               std::string label = {});
};

// A net of scalar fields: a rule (eps, point) -> value. Expression-backed
// nets additionally carry exact coordinate partials (symbolic), which the
// k-association machinery requires; hand-rolled sampler nets only support
// order-0 queries.
class FieldNet {
public:
    FieldNet() = default;

    // Sampler-only net (no exact partials). Coordinate names default to
    // x0, x1, ...
    FieldNet(int dim, std::function<double(double, std::span<const double>)> sampler,
             std::string label = {}, std::vector<std::string> coords = {});

    static FieldNet from_expr(Expr e, std::vector<std::string> coords,
                              std::map<std::string, double> params = {},
                              std::shared_ptr<const DeltaNet> delta = nullptr,
                              std::string label = {});

    int dim() const { return dim_; }
    const std::string& label() const { return label_; }
    bool references_delta() const { return references_delta_; }
    const DeltaNet* delta() const { return delta_.get(); }
    bool has_exact_partials() const { return expr_.valid(); }
    const std::vector<std::string>& coords() const { return coords_; }

    double sample(double eps, std::span<const double> point) const;

    // Exact partial derivative sampler for the multi-index `orders`
    // (one entry per coordinate, total order <= 2). Throws ConfigError for
    // sampler-only nets or orders beyond the delta cap.
    double sample_partial(std::span<const int> orders, double eps,
                          std::span<const double> point) const;

private:
    int dim_ = 0;
    std::string label_;
    std::function<double(double, std::span<const double>)> sampler_;
    bool references_delta_ = false;
    std::shared_ptr<const DeltaNet> delta_;

    // Expression backend
    Expr expr_;
    std::vector<std::string> coords_;
    std::map<std::string, double> params_;
    mutable std::map<std::vector<int>, Expr> partial_cache_;
    Expr partial_expr(std::span<const int> orders) const;
};

} // namespace gengeo
