#include "gengeo/nets.hpp"

namespace gengeo {

ScalarNet ScalarNet::from_expr(const Expr& e, std::shared_ptr<const DeltaNet> net,
                               std::string label) {
    auto vars = e.free_variables();
    if (!vars.empty())
        throw ConfigError("scalar net expression may only depend on eps; found variable '" +
                          *vars.begin() + "'");
    ScalarNet out;
    out.label = label.empty() ? e.to_string() : std::move(label);
    out.sample = [e, net](double eps) {
        Bindings b;
        b.eps = eps;
        b.delta = net.get();
        return e.evaluate(b);
    };
    return out;
}

FieldNet::FieldNet(int dim, std::function<double(double, std::span<const double>)> sampler,
                   std::string label, std::vector<std::string> coords)
    : dim_(dim), label_(std::move(label)), sampler_(std::move(sampler)),
      coords_(std::move(coords)) {
    if (dim_ < 1) throw ConfigError("field net dimension must be positive");
    if (!sampler_) throw ConfigError("field net needs a sampler");
    if (coords_.empty())
        for (int i = 0; i < dim_; ++i) coords_.push_back("x" + std::to_string(i));
    if (static_cast<int>(coords_.size()) != dim_)
        throw ConfigError("field net coordinate list has wrong length");
}

FieldNet FieldNet::from_expr(Expr e, std::vector<std::string> coords,
                             std::map<std::string, double> params,
                             std::shared_ptr<const DeltaNet> delta, std::string label) {
    if (coords.empty()) throw ConfigError("field net needs at least one coordinate");
    for (const auto& v : e.free_variables()) {
        if (std::find(coords.begin(), coords.end(), v) == coords.end() && !params.count(v))
            throw ConfigError("field net expression references unknown identifier '" + v + "'");
    }
    if (e.references_delta() && !delta)
        throw ConfigError("field net expression uses delta but no delta net was supplied");

    FieldNet out;
    out.dim_ = static_cast<int>(coords.size());
    out.label_ = label.empty() ? e.to_string() : std::move(label);
    out.references_delta_ = e.references_delta();
    out.delta_ = std::move(delta);
    out.expr_ = e;
    out.coords_ = std::move(coords);
    out.params_ = std::move(params);
    return out;
}

double FieldNet::sample(double eps, std::span<const double> point) const {
    if (static_cast<int>(point.size()) != dim_)
        throw ConfigError("field net sampled with wrong point dimension");
    if (sampler_) return sampler_(eps, point);
    static const std::vector<int> kZero;
    std::vector<int> orders(dim_, 0);
    return sample_partial(orders, eps, point);
}

Expr FieldNet::partial_expr(std::span<const int> orders) const {
    std::vector<int> key(orders.begin(), orders.end());
    auto it = partial_cache_.find(key);
    if (it != partial_cache_.end()) return it->second;
    Expr d = expr_;
    for (std::size_t a = 0; a < key.size(); ++a)
        for (int k = 0; k < key[a]; ++k) d = d.differentiate(coords_[a]);
    partial_cache_.emplace(std::move(key), d);
    return d;
}

double FieldNet::sample_partial(std::span<const int> orders, double eps,
                                std::span<const double> point) const {
    if (!expr_.valid())
        throw ConfigError("field net '" + label_ + "' has no expression backend; "
                          "exact partials are unavailable");
    if (static_cast<int>(orders.size()) != dim_)
        throw ConfigError("partial multi-index has wrong dimension");
    int total = 0;
    for (int o : orders) total += o;
    if (total > 2 && expr_.references_delta())
        throw ConfigError("derivative order beyond 2 requested on a delta-bearing net");

    Bindings b;
    b.eps = eps;
    b.delta = delta_.get();
    for (int a = 0; a < dim_; ++a) b.set(coords_[a], point[a]);
    for (const auto& [k, v] : params_) b.set(k, v);
    return partial_expr(orders).evaluate(b);
}

} // namespace gengeo
