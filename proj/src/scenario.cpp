#include "gengeo/scenario.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace gengeo {

using nlohmann::json;

std::pair<int, int> parse_component_key(const std::string& key,
                                        const std::vector<std::string>& coords) {
    auto index_of = [&](const std::string& name) {
        auto it = std::find(coords.begin(), coords.end(), name);
        if (it == coords.end())
            throw ConfigError("component key '" + key + "' references unknown coordinate '" +
                              name + "'");
        return static_cast<int>(it - coords.begin());
    };
    const auto underscore = key.find('_');
    if (underscore != std::string::npos)
        return {index_of(key.substr(0, underscore)), index_of(key.substr(underscore + 1))};
    // Single-character coordinate names may be concatenated ("uv").
    if (key.size() == 2) {
        const std::string a(1, key[0]), b(1, key[1]);
        return {index_of(a), index_of(b)};
    }
    throw ConfigError("cannot parse component key '" + key + "'");
}

GeneralizedMetric Scenario::instantiate() const {
    const int d = dim;
    std::vector<std::vector<std::string>> texts(d, std::vector<std::string>(d));
    for (const auto& [key, text] : components) {
        auto [i, j] = parse_component_key(key, coordinates);
        if (i > j) std::swap(i, j);
        if (!texts[i][j].empty() && texts[i][j] != text)
            throw ConfigError("scenario '" + name + "' defines component (" + std::to_string(i) +
                              "," + std::to_string(j) + ") twice with different expressions");
        texts[i][j] = text;
    }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (texts[i][j].empty() && i <= j) texts[i][j] = "0";
    auto net = std::make_shared<DeltaNet>(DeltaProfile::named(delta_profile), delta_radius_rule);
    return GeneralizedMetric::build(coordinates, texts, parameters, std::move(net), name);
}

Region Scenario::default_region() const {
    if (default_box.empty()) throw ConfigError("scenario '" + name + "' has no default region");
    if (default_samples.empty()) return Region(default_box);
    return Region(default_box, default_samples);
}

EpsilonGrid Scenario::default_grid() const {
    return EpsilonGrid::geometric(default_e_max, default_e_min, default_e_count);
}

Scenario Scenario::with_delta(const std::string& profile) const {
    Scenario s = *this;
    s.delta_profile = profile;
    return s;
}

Scenario Scenario::with_f(const std::string& f_text) const {
    if (f_slot_key.empty())
        throw ConfigError("scenario '" + name + "' has no profile slot for --f");
    Scenario s = *this;
    s.components[f_slot_key] = "(" + f_text + ")*delta(" + f_slot_var + ")";
    return s;
}

Scenario Scenario::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario JSON is malformed: ") + e.what());
    }
    Scenario s;
    s.name = j.value("label", "unnamed");
    s.coordinates = j.at("coords").get<std::vector<std::string>>();
    s.dim = static_cast<int>(s.coordinates.size());
    if (j.contains("dim") && j.at("dim").get<int>() != s.dim)
        throw ConfigError("scenario dim does not match coords length");
    if (j.contains("components"))
        for (const auto& [k, v] : j.at("components").items())
            s.components[k] = v.get<std::string>();
    if (j.contains("parameters"))
        for (const auto& [k, v] : j.at("parameters").items())
            s.parameters[k] = v.get<double>();
    if (j.contains("delta")) {
        s.delta_profile = j.at("delta").value("profile", "bump");
        s.delta_radius_rule = j.at("delta").value("radius_rule", "eps");
    }
    if (j.contains("region")) {
        for (const auto& iv : j.at("region"))
            s.default_box.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
    }
    if (j.contains("grid")) {
        s.default_e_max = j.at("grid").value("emax", s.default_e_max);
        s.default_e_min = j.at("grid").value("emin", s.default_e_min);
        s.default_e_count = j.at("grid").value("count", s.default_e_count);
    }
    if (j.contains("closed_forms"))
        for (const auto& [k, v] : j.at("closed_forms").items())
            s.closed_forms[k] = v.get<std::string>();
    s.notes = j.value("notes", "");
    return s;
}

std::string Scenario::to_json_text() const {
    json j;
    j["label"] = name;
    j["dim"] = dim;
    j["coords"] = coordinates;
    j["components"] = json::object();
    for (const auto& [k, v] : components) j["components"][k] = v;
    j["parameters"] = json::object();
    for (const auto& [k, v] : parameters) j["parameters"][k] = v;
    j["delta"] = {{"profile", delta_profile}, {"radius_rule", delta_radius_rule}};
    if (!default_box.empty()) {
        json r = json::array();
        for (const auto& iv : default_box) r.push_back({iv[0], iv[1]});
        j["region"] = r;
    }
    j["grid"] = {{"emax", default_e_max}, {"emin", default_e_min}, {"count", default_e_count}};
    if (!closed_forms.empty()) {
        j["closed_forms"] = json::object();
        for (const auto& [k, v] : closed_forms) j["closed_forms"][k] = v;
    }
    if (!notes.empty()) j["notes"] = notes;
    return j.dump(2);
}

const std::vector<Scenario>& ScenarioRegistry::builtin() {
    static const std::vector<Scenario> scenarios = [] {
        std::vector<Scenario> out;

        {
            Scenario s;
            s.name = "ppwave";
            s.coordinates = {"u", "v", "x", "y"};
            s.dim = 4;
            s.components = {{"uu", "(x^2 - y^2)*delta(u)"},
                            {"uv", "-1/2"},
                            {"xx", "1"},
                            {"yy", "1"}};
            s.f_slot_key = "uu";
            s.f_slot_var = "u";
            s.default_box = {{-1.0, 1.0}, {-1.0, 1.0}, {0.5, 1.5}, {0.5, 1.5}};
            s.default_samples = {17, 3, 7, 7};
            s.default_e_max = 0.2;
            s.default_e_min = 0.0125;
            s.default_e_count = 5;
            s.closed_forms = {{"x", "1 + pos(t)"}, {"y", "1 - pos(t)"}, {"v", "2*pos(t)"}};
            s.notes = "impulsive plane-fronted wave; geodesics refract across u=0";
            out.push_back(s);
        }
        {
            Scenario s;
            s.name = "minkowski";
            s.coordinates = {"t", "x", "y", "z"};
            s.dim = 4;
            s.components = {{"tt", "-1"}, {"xx", "1"}, {"yy", "1"}, {"zz", "1"}};
            s.default_box = {{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}};
            s.default_samples = {5, 5, 5, 5};
            s.notes = "flat spacetime, the all-zeros reference";
            out.push_back(s);
        }
        {
            Scenario s;
            s.name = "sphere2";
            s.coordinates = {"theta", "phi"};
            s.dim = 2;
            s.components = {{"theta_theta", "1"}, {"phi_phi", "sin(theta)^2"}};
            s.default_box = {{0.4, 2.7}, {0.0, 3.0}};
            s.default_samples = {17, 17};
            s.notes = "unit round sphere away from the poles; scalar curvature 2";
            out.push_back(s);
        }
        {
            Scenario s;
            s.name = "remark35";
            s.coordinates = {"x"};
            s.dim = 1;
            s.components = {{"x_x", "x^2 + delta(x)"}};
            s.default_box = {{-1.0, 1.0}};
            s.default_samples = {257};
            s.notes = "nondegeneracy depends on the mollifier microstructure: "
                      "pass with bump, fail with signed-split";
            out.push_back(s);
        }
        {
            Scenario s;
            s.name = "example24";
            s.coordinates = {"x"};
            s.dim = 1;
            s.components = {{"x_x", "eps^(x^2/(x^4 + eps^4))"}};
            s.default_box = {{0.0, 1.0}};
            s.default_samples = {64};
            s.notes = "pointwise strictly nonzero everywhere yet not uniformly so on [0,1]";
            out.push_back(s);
        }
        return out;
    }();
    return scenarios;
}

const Scenario& ScenarioRegistry::find(const std::string& name) {
    for (const Scenario& s : builtin())
        if (s.name == name) return s;
    throw ConfigError("unknown scenario '" + name + "' (see list-scenarios)");
}

} // namespace gengeo
