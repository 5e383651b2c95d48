#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gengeo/epsilon_grid.hpp"
#include "gengeo/metric.hpp"
#include "gengeo/region.hpp"

namespace gengeo {

// A named, reproducible configuration: metric definition plus default
// region, grid, delta profile and (when known) closed-form shadow curves.
struct Scenario {
    std::string name;
    int dim = 0;
    std::vector<std::string> coordinates;
    std::map<std::string, std::string> components;  // key "uu" or "u_v"; missing = "0"
    std::map<std::string, double> parameters;
    std::string delta_profile = "bump";
    std::string delta_radius_rule = "eps";
    std::vector<std::array<double, 2>> default_box;
    std::vector<int> default_samples;
    double default_e_max = 0.2, default_e_min = 0.0125;
    int default_e_count = 5;
    std::map<std::string, std::string> closed_forms;  // coordinate -> expression in t
    std::string notes;
    // Slot for the plane-wave profile override (--f): when set, this
    // component key is rebuilt as "(<f>)*delta(<var>)".
    std::string f_slot_key;
    std::string f_slot_var;

    GeneralizedMetric instantiate() const;
    Region default_region() const;
    EpsilonGrid default_grid() const;

    Scenario with_delta(const std::string& profile) const;
    Scenario with_f(const std::string& f_text) const;

    // JSON round trip (schema in README).
    static Scenario from_json_text(const std::string& text);
    std::string to_json_text() const;
};

class ScenarioRegistry {
public:
    static const std::vector<Scenario>& builtin();
    static const Scenario& find(const std::string& name);
};

// Resolves a component key like "uu", "u_v" or "theta_phi" against the
// coordinate list; returns (i, j) or throws.
std::pair<int, int> parse_component_key(const std::string& key,
                                        const std::vector<std::string>& coords);

} // namespace gengeo
