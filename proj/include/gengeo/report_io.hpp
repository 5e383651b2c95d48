#pragma once
#include <charconv>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gengeo/asymptotics.hpp"
#include "gengeo/delta_net.hpp"

namespace gengeo {

// Shortest round-trip decimal form; CSV payloads must be byte-identical
// across runs.
inline std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : cols_(header.size()) {
        append_row(header);
    }

    void append_row(const std::vector<std::string>& cells) {
        if (cells.size() != cols_) throw ConfigError("csv row has wrong arity");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) body_ += ',';
            body_ += cells[i];
        }
        body_ += '\n';
    }

    void append_numeric_row(const std::vector<double>& cells) {
        std::vector<std::string> s;
        s.reserve(cells.size());
        for (double v : cells) s.push_back(format_double(v));
        append_row(s);
    }

    const std::string& str() const { return body_; }

private:
    std::size_t cols_;
    std::string body_;
};

// FNV-1a 64-bit content digest for run manifests.
inline std::string fnv1a_digest(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = hex[h & 0xF];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

inline nlohmann::json to_json(const GrowthReport& r, const std::string& label = {},
                              const EpsilonGrid* grid = nullptr) {
    nlohmann::json t = nlohmann::json::array();
    for (const auto& [eps, sup] : r.per_eps_sup) t.push_back({{"eps", eps}, {"value", sup}});
    std::string verdict = to_string(r.verdict);
    if (r.verdict == GrowthVerdict::NegligibleLike)
        verdict += "(" + std::to_string(r.negligible_order) + ")";
    nlohmann::json j = {{"label", label},
                        {"order", r.estimated_order},
                        {"residual", r.fit_residual},
                        {"tail_decay", r.tail_decay_exponent},
                        {"table", t},
                        {"verdict", verdict}};
    if (grid)
        j["grid"] = std::vector<double>(grid->values().begin(), grid->values().end());
    return j;
}

inline nlohmann::json to_json(const InvertibilityReport& r, const EpsilonGrid& grid) {
    nlohmann::json t = nlohmann::json::array();
    for (const auto& [eps, inf] : r.inf_table) t.push_back({{"eps", eps}, {"value", inf}});
    nlohmann::json j = {{"label", r.label},
                        {"grid", std::vector<double>(grid.values().begin(), grid.values().end())},
                        {"table", t},
                        {"verdict", r.decision ? "invertible" : "not-invertible"},
                        {"decision", r.decision},
                        {"worst_point", r.worst_point}};
    if (r.exponent) j["order"] = *r.exponent;
    return j;
}

inline nlohmann::json to_json(const StrictDeltaReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"eps", row.eps},
                        {"integral", row.integral},
                        {"radius", row.radius},
                        {"l1", row.l1}});
    return {{"rows", rows},
            {"integral_ok", r.integral_ok},
            {"radius_shrinks", r.radius_shrinks},
            {"l1_bounded", r.l1_bounded},
            {"l1_bound", r.l1_bound},
            {"pass", r.pass()}};
}

} // namespace gengeo
