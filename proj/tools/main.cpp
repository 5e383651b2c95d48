// Command-line front end: scenario registry, config resolution, command
// dispatch and artifact emission. Every run writes result.csv, summary.json
// and manifest.json into --out; payloads are byte-deterministic given the
// same resolved config (manifest wall time excluded).
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gengeo/acceptance.hpp"
#include "gengeo/curvature.hpp"
#include "gengeo/report_io.hpp"
#include "gengeo/scenario.hpp"
#include "gengeo/shadow.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gengeo;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
    std::string scenario;
    std::string config_path;
    std::string grid_text;
    double eps = 0.0;
    std::string region_text;
    double tol = 1e-10;
    std::string out_dir = "out";
    std::string delta_profile;
    std::string f_expr;
    std::string init_text;
    double t_end = 1.0;
    std::string at_text;
    bool print_symbols = false;
    std::string family_path;
    std::string closed_form;
    double exclude = 0.05;
    int samples = 201;
};

// --- small parsers ----------------------------------------------------------

EpsilonGrid parse_grid(const std::string& text) {
    double emax, emin;
    int count;
    if (std::sscanf(text.c_str(), "%lf,%lf,%d", &emax, &emin, &count) != 3)
        throw ConfigError("grid must be 'emax,emin,count', got '" + text + "'");
    return EpsilonGrid::geometric(emax, emin, count);
}

// "[-1,1]x[0,2]@65" -> intervals with optional per-interval sample counts.
Region parse_region(const std::string& text) {
    std::vector<std::array<double, 2>> box;
    std::vector<int> counts;
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (text[pos] == 'x' || text[pos] == 'X' ||
            std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
            continue;
        }
        if (text[pos] != '[') throw ConfigError("region syntax: expected '[' in '" + text + "'");
        const auto close = text.find(']', pos);
        if (close == std::string::npos) throw ConfigError("region syntax: missing ']'");
        double lo, hi;
        if (std::sscanf(text.substr(pos + 1, close - pos - 1).c_str(), "%lf,%lf", &lo, &hi) != 2)
            throw ConfigError("region syntax: expected '[lo,hi]'");
        box.push_back({lo, hi});
        pos = close + 1;
        int n = Region::kDefaultSamples;
        if (pos < text.size() && text[pos] == '@') {
            std::size_t used = 0;
            n = std::stoi(text.substr(pos + 1), &used);
            pos += 1 + used;
        }
        counts.push_back(n);
    }
    if (box.empty()) throw ConfigError("region is empty");
    return Region(box, counts);
}

// "u0=-1,x=1,xdot=0,...": plain keys set positions, 'dot' suffixes set
// velocities, and a '0' suffix marks the affine coordinate: it sets the
// parameter origin t0 and defaults that coordinate's velocity to 1.
GeodesicInit parse_init(const std::string& text, const std::vector<std::string>& coords) {
    GeodesicInit init;
    const int d = static_cast<int>(coords.size());
    init.position.assign(d, 0.0);
    init.velocity.assign(d, 0.0);
    bool t0_set = false;
    std::map<std::string, double> kv;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string item = text.substr(pos, comma - pos);
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("init entry '" + item + "' needs '='");
        kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        pos = comma + 1;
    }
    auto coord_index = [&](const std::string& name) -> std::optional<int> {
        for (int i = 0; i < d; ++i)
            if (coords[i] == name) return i;
        return std::nullopt;
    };
    for (const auto& [key, value] : kv) {
        if (auto i = coord_index(key)) {
            init.position[*i] = value;
            continue;
        }
        if (key.size() > 3 && key.substr(key.size() - 3) == "dot") {
            if (auto i = coord_index(key.substr(0, key.size() - 3))) {
                init.velocity[*i] = value;
                continue;
            }
        }
        if (key.size() > 1 && key.back() == '0') {
            if (auto i = coord_index(key.substr(0, key.size() - 1))) {
                init.position[*i] = value;
                init.t0 = value;
                t0_set = true;
                if (!kv.count(coords[*i] + "dot")) init.velocity[*i] = 1.0;
                continue;
            }
        }
        throw ConfigError("init entry '" + key + "' matches no coordinate of the scenario");
    }
    if (!t0_set)
        throw ConfigError("init needs one '<coord>0=' entry marking the parameter origin");
    return init;
}

std::vector<double> parse_point(const std::string& text,
                                const std::vector<std::string>& coords) {
    std::vector<double> p(coords.size(), 0.0);
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string item = text.substr(pos, comma - pos);
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("point entry '" + item + "' needs '='");
        const std::string key = item.substr(0, eq);
        bool found = false;
        for (std::size_t i = 0; i < coords.size(); ++i)
            if (coords[i] == key) {
                p[i] = std::stod(item.substr(eq + 1));
                found = true;
            }
        if (!found) throw ConfigError("point entry '" + key + "' matches no coordinate");
        pos = comma + 1;
    }
    return p;
}

// --- artifact emission -------------------------------------------------------

class Emitter {
public:
    Emitter(const Options& opt, const std::string& command, json resolved)
        : out_dir_(opt.out_dir), command_(command), resolved_(std::move(resolved)),
          start_(std::chrono::steady_clock::now()) {}

    void set_csv(std::string csv) { csv_ = std::move(csv); }
    void set_summary(json j) { summary_ = std::move(j); }

    void write() {
        fs::create_directories(out_dir_);
        const std::string summary_text = summary_.dump(2) + "\n";
        write_file("result.csv", csv_);
        write_file("summary.json", summary_text);
        json manifest = {
            {"command", command_},
            {"config", resolved_},
            {"version", kVersion},
            {"wall_ms",
             std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                       start_)
                 .count()},
            {"outputs",
             {{"result.csv", fnv1a_digest(csv_)},
              {"summary.json", fnv1a_digest(summary_text)}}},
        };
        write_file("manifest.json", manifest.dump(2) + "\n");
    }

private:
    void write_file(const std::string& name, const std::string& content) {
        std::ofstream out(fs::path(out_dir_) / name, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + (fs::path(out_dir_) / name).string());
        out << content;
    }

    std::string out_dir_, command_;
    json resolved_;
    std::string csv_;
    json summary_;
    std::chrono::steady_clock::time_point start_;
};

json resolved_config(const Options& opt, const std::string& command) {
    return json{{"command", command},        {"scenario", opt.scenario},
                {"grid", opt.grid_text},     {"eps", opt.eps},
                {"region", opt.region_text}, {"tol", opt.tol},
                {"delta", opt.delta_profile}, {"f", opt.f_expr},
                {"init", opt.init_text},     {"t_end", opt.t_end},
                {"at", opt.at_text},         {"exclude", opt.exclude},
                {"samples", opt.samples}};
}

Scenario resolve_scenario(const Options& opt) {
    if (opt.scenario.empty()) throw ConfigError("this command needs --scenario");
    Scenario s = ScenarioRegistry::find(opt.scenario);
    if (!opt.delta_profile.empty()) s = s.with_delta(opt.delta_profile);
    if (!opt.f_expr.empty()) s = s.with_f(opt.f_expr);
    return s;
}

EpsilonGrid resolve_grid(const Options& opt, const Scenario& s) {
    return opt.grid_text.empty() ? s.default_grid() : parse_grid(opt.grid_text);
}

Region resolve_region(const Options& opt, const Scenario& s) {
    return opt.region_text.empty() ? s.default_region() : parse_region(opt.region_text);
}

// --- commands -----------------------------------------------------------------

int cmd_list_scenarios(const Options& opt) {
    Emitter em(opt, "list-scenarios", resolved_config(opt, "list-scenarios"));
    CsvWriter csv({"name", "dim", "notes"});
    json arr = json::array();
    for (const Scenario& s : ScenarioRegistry::builtin()) {
        csv.append_row({s.name, std::to_string(s.dim), s.notes});
        arr.push_back(json::parse(s.to_json_text()));
        std::cout << s.name << "  (dim " << s.dim << ")  " << s.notes << "\n";
    }
    em.set_csv(csv.str());
    em.set_summary({{"scenarios", arr}});
    em.write();
    return 0;
}

int cmd_check_metric(const Options& opt) {
    Scenario s = resolve_scenario(opt);
    auto metric = s.instantiate();
    EpsilonGrid grid = resolve_grid(opt, s);
    Region region = resolve_region(opt, s);
    auto rep = metric.check_nondegenerate(region, grid);

    Emitter em(opt, "check-metric", resolved_config(opt, "check-metric"));
    CsvWriter csv({"eps", "inf_abs_det"});
    for (const auto& [eps, inf] : rep.inf_table) csv.append_numeric_row({eps, inf});
    em.set_csv(csv.str());
    em.set_summary(to_json(rep, grid));
    em.write();
    std::cout << "nondegenerate: " << (rep.decision ? "true" : "false");
    if (rep.exponent) std::cout << " (exponent " << *rep.exponent << ")";
    std::cout << "\n";
    return 0;
}

int cmd_index(const Options& opt) {
    Scenario s = resolve_scenario(opt);
    auto metric = s.instantiate();
    EpsilonGrid grid = resolve_grid(opt, s);
    Region region = resolve_region(opt, s);
    auto rep = metric.compute_index(region, grid);

    Emitter em(opt, "index", resolved_config(opt, "index"));
    CsvWriter csv({"eps", "neg_count_min", "neg_count_max", "min_abs_eigenvalue"});
    for (std::size_t i = 0; i < rep.per_eps_signatures.size(); ++i) {
        const auto& [eps, lo, hi] = rep.per_eps_signatures[i];
        csv.append_numeric_row(
            {eps, double(lo), double(hi), rep.min_abs_eigenvalue_table[i].second});
    }
    em.set_csv(csv.str());
    em.set_summary({{"index", rep.index}, {"stable", rep.stable}});
    em.write();
    std::cout << "index: " << rep.index << " (stable: " << (rep.stable ? "true" : "false")
              << ")\n";
    return 0;
}

int cmd_christoffel(const Options& opt) {
    Scenario s = resolve_scenario(opt);
    auto metric = s.instantiate();
    auto gamma = christoffel(metric);

    Emitter em(opt, "christoffel", resolved_config(opt, "christoffel"));
    CsvWriter csv({"k", "i", "j", "expr"});
    json arr = json::array();
    for (const auto& [k, i, j] : gamma.nonzero()) {
        if (j < i) continue;  // mirrored slots share the expression
        const std::string text = gamma.symbol(k, i, j).to_string();
        csv.append_row({std::to_string(k), std::to_string(i), std::to_string(j), text});
        arr.push_back({{"k", k}, {"i", i}, {"j", j}, {"expr", text}});
        if (opt.print_symbols)
            std::cout << "Gamma^" << metric.coordinates()[k] << "_{"
                      << metric.coordinates()[i] << " " << metric.coordinates()[j]
                      << "} = " << text << "\n";
    }
    em.set_csv(csv.str());
    em.set_summary({{"nonzero", arr}});
    em.write();
    return 0;
}

int cmd_geodesic(const Options& opt) {
    Scenario s = resolve_scenario(opt);
    auto metric = s.instantiate();
    auto gamma = christoffel(metric);
    if (opt.init_text.empty()) throw ConfigError("geodesic needs --init");
    GeodesicInit init = parse_init(opt.init_text, metric.coordinates());
    EpsilonGrid grid = resolve_grid(opt, s);
    auto fam = solve_family(gamma, init, opt.t_end, grid, opt.tol, opt.samples);

    Emitter em(opt, "geodesic", resolved_config(opt, "geodesic"));
    std::vector<std::string> header = {"eps", "t"};
    for (const auto& c : metric.coordinates()) header.push_back(c);
    for (const auto& c : metric.coordinates()) header.push_back(c + "dot");
    CsvWriter csv(header);
    for (const auto& traj : fam.members)
        for (std::size_t i = 0; i < traj.t.size(); ++i) {
            std::vector<double> row = {traj.eps, traj.t[i]};
            row.insert(row.end(), traj.positions[i].begin(), traj.positions[i].end());
            row.insert(row.end(), traj.velocities[i].begin(), traj.velocities[i].end());
            csv.append_numeric_row(row);
        }
    json endpoints = json::array();
    for (const auto& traj : fam.members) {
        json e = {{"eps", traj.eps},
                  {"steps", traj.stats.steps},
                  {"rejected", traj.stats.rejected}};
        for (std::size_t c = 0; c < metric.coordinates().size(); ++c) {
            e[metric.coordinates()[c]] = traj.positions.back()[c];
            e[metric.coordinates()[c] + "dot"] = traj.velocities.back()[c];
        }
        endpoints.push_back(e);
    }
    em.set_csv(csv.str());
    em.set_summary({{"t_end", opt.t_end}, {"endpoints", endpoints}});
    em.write();
    std::cout << "integrated " << fam.members.size() << " members to t=" << opt.t_end << "\n";
    return 0;
}

int cmd_curvature(const Options& opt) {
    Scenario s = resolve_scenario(opt);
    auto metric = s.instantiate();
    auto bundle = curvature(metric, christoffel(metric));
    const double eps = opt.eps > 0.0 ? opt.eps : 0.05;
    std::vector<double> p = opt.at_text.empty()
                                ? std::vector<double>(metric.dim(), 0.0)
                                : parse_point(opt.at_text, metric.coordinates());
    Bindings b = metric.make_bindings(p, eps);

    Emitter em(opt, "curvature", resolved_config(opt, "curvature"));
    CsvWriter csv({"tensor", "indices", "value"});
    json comps = json::object();
    const int d = metric.dim();
    json ricci = json::array();
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            const double v = bundle.ricci(i, j).evaluate(b);
            if (v != 0.0) {
                csv.append_row(
                    {"ricci", std::to_string(i) + std::to_string(j), format_double(v)});
                ricci.push_back({{"i", i}, {"j", j}, {"value", v}});
            }
        }
    comps["ricci"] = ricci;
    const double scalar_value = bundle.scalar().evaluate(b);
    comps["scalar"] = scalar_value;
    csv.append_row({"scalar", "", format_double(scalar_value)});
    json riemann = json::array();
    for (int a = 0; a < d; ++a)
        for (int bb = 0; bb < d; ++bb)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e) {
                    const double v = bundle.riemann(a, bb, c, e).evaluate(b);
                    if (v != 0.0) {
                        const std::string idx = std::to_string(a) + std::to_string(bb) +
                                                std::to_string(c) + std::to_string(e);
                        csv.append_row({"riemann", idx, format_double(v)});
                        riemann.push_back({{"abcd", idx}, {"value", v}});
                    }
                }
    comps["riemann"] = riemann;
    auto diag = curvature_diagnostics(bundle, {p}, eps);
    json jdiag = {{"antisym_first", diag.antisym_first},
                  {"antisym_second", diag.antisym_second},
                  {"pair_symmetry", diag.pair_symmetry},
                  {"first_bianchi", diag.first_bianchi},
                  {"contracted_bianchi", diag.contracted_bianchi},
                  {"contracted_bianchi_skipped", diag.contracted_bianchi_skipped},
                  {"scale", diag.scale}};
    em.set_csv(csv.str());
    em.set_summary({{"eps", eps}, {"at", p}, {"components", comps}, {"diagnostics", jdiag}});
    em.write();
    std::cout << "curvature evaluated at eps=" << eps << "; scale " << diag.scale << "\n";
    return 0;
}

int cmd_shadow(const Options& opt) {
    if (opt.family_path.empty()) throw ConfigError("shadow needs --family CSV");
    std::ifstream in(opt.family_path);
    if (!in) throw ConfigError("cannot read family file '" + opt.family_path + "'");
    std::string header;
    std::getline(in, header);
    // Columns: eps,t,<coords...>,<coord>dot... as written by the geodesic
    // command.
    std::vector<std::string> cols;
    for (std::size_t pos = 0; pos <= header.size();) {
        auto comma = header.find(',', pos);
        if (comma == std::string::npos) comma = header.size();
        cols.push_back(header.substr(pos, comma - pos));
        pos = comma + 1;
    }
    if (cols.size() < 3 || cols[0] != "eps" || cols[1] != "t")
        throw ConfigError("family CSV must start with eps,t columns");
    const int d = static_cast<int>((cols.size() - 2) / 2);

    std::map<double, std::vector<std::pair<double, std::vector<double>>>, std::greater<>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> vals;
        for (std::size_t pos = 0; pos <= line.size();) {
            auto comma = line.find(',', pos);
            if (comma == std::string::npos) comma = line.size();
            vals.push_back(std::stod(line.substr(pos, comma - pos)));
            pos = comma + 1;
        }
        if (vals.size() != cols.size()) throw ConfigError("malformed family CSV row");
        std::vector<double> p(vals.begin() + 2, vals.begin() + 2 + d);
        rows[vals[0]].emplace_back(vals[1], std::move(p));
    }
    if (rows.empty()) throw ConfigError("family CSV has no data rows");
    GeodesicFamily fam;
    for (auto& [eps, series] : rows) {
        Trajectory traj;
        traj.eps = eps;
        for (auto& [t, p] : series) {
            traj.t.push_back(t);
            traj.positions.push_back(p);
            traj.velocities.push_back(std::vector<double>(d, 0.0));
        }
        if (fam.t.empty()) fam.t = traj.t;
        fam.members.push_back(std::move(traj));
    }

    // Closed forms: "x:1+pos(u);y:1-pos(u);v:2*pos(u)" keyed by column name.
    std::vector<std::optional<Expr>> forms(d);
    std::string tvar = "u";
    if (!opt.closed_form.empty()) {
        for (std::size_t pos = 0; pos <= opt.closed_form.size();) {
            auto semi = opt.closed_form.find(';', pos);
            if (semi == std::string::npos) semi = opt.closed_form.size();
            const std::string item = opt.closed_form.substr(pos, semi - pos);
            pos = semi + 1;
            if (item.empty()) continue;
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                throw ConfigError("closed-form entry '" + item + "' needs 'coord:expr'");
            const std::string name = item.substr(0, colon);
            bool found = false;
            for (int c = 0; c < d; ++c)
                if (cols[2 + c] == name) {
                    Expr e = parse_expr(item.substr(colon + 1));
                    auto vars = e.free_variables();
                    if (vars.size() > 1)
                        throw ConfigError("closed form for '" + name +
                                          "' must use a single variable");
                    if (!vars.empty()) tvar = *vars.begin();
                    forms[c] = e;
                    found = true;
                }
            if (!found) throw ConfigError("closed-form coordinate '" + name + "' not in CSV");
        }
    }

    auto sh = geodesic_shadow(fam, forms, tvar, opt.exclude);
    Emitter em(opt, "shadow", resolved_config(opt, "shadow"));
    std::vector<std::string> header_out = {"t"};
    for (int c = 0; c < d; ++c) header_out.push_back(cols[2 + c] + "_limit");
    CsvWriter csv(header_out);
    for (std::size_t i = 0; i < sh.t.size(); ++i) {
        std::vector<double> row = {sh.t[i]};
        for (int c = 0; c < d; ++c) row.push_back(sh.limit_curves[c][i]);
        csv.append_numeric_row(row);
    }
    json per_coord = json::object();
    for (int c = 0; c < d; ++c) {
        double order_lo = 4.0, order_hi = 0.25;
        for (double p : sh.fitted_orders[c]) {
            order_lo = std::min(order_lo, p);
            order_hi = std::max(order_hi, p);
        }
        per_coord[cols[2 + c]] = {{"max_dev", forms[c] ? json(sh.max_deviation[c]) : json()},
                                  {"fitted_order_range", {order_lo, order_hi}},
                                  {"trustworthy_fraction", sh.trustworthy_fraction[c]}};
    }
    em.set_csv(csv.str());
    em.set_summary({{"flagged", sh.flagged}, {"coordinates", per_coord}});
    em.write();
    std::cout << (sh.flagged
                      ? "flagged: extrapolation untrustworthy at >10% of grid points\n"
                      : "shadow extracted\n");
    return 0;
}

int cmd_classify(const Options& opt) {
    Scenario s = resolve_scenario(opt);
    auto metric = s.instantiate();
    EpsilonGrid grid = resolve_grid(opt, s);
    auto net = metric.det_net();
    if (opt.at_text.empty()) throw ConfigError("classify needs --at <point>");
    std::vector<double> p = parse_point(opt.at_text, metric.coordinates());
    ScalarNet at{[&net, p](double e) { return net.sample(e, p); }, "det at point"};
    auto nz = is_strictly_nonzero(at, grid);
    auto growth = estimate_growth_order(at, grid);

    Emitter em(opt, "classify", resolved_config(opt, "classify"));
    CsvWriter csv({"eps", "abs_value"});
    for (const auto& [eps, v] : growth.per_eps_sup) csv.append_numeric_row({eps, v});
    json summary = to_json(growth, "det(" + s.name + ") at " + opt.at_text, &grid);
    summary["strictly_nonzero"] = nz.decision;
    if (nz.witness_exponent) summary["witness_exponent"] = *nz.witness_exponent;
    em.set_csv(csv.str());
    em.set_summary(summary);
    em.write();
    std::cout << "strictly nonzero: " << (nz.decision ? "true" : "false");
    if (nz.witness_exponent) std::cout << " (m = " << *nz.witness_exponent << ")";
    std::cout << ", growth verdict: " << summary["verdict"].get<std::string>() << "\n";
    return 0;
}

int cmd_acceptance(const Options& opt) {
    Emitter em(opt, "acceptance", resolved_config(opt, "acceptance"));
    const auto results = run_acceptance_suite();
    CsvWriter csv({"id", "pass", "seconds", "title"});
    json arr = json::array();
    int failures = 0;
    for (const auto& r : results) {
        std::printf("[%2d/11] %s  %-48s (%.1f s)%s%s\n", r.id, r.pass ? "PASS" : "FAIL",
                    r.title.c_str(), r.seconds, r.detail.empty() ? "" : "  -- ",
                    r.detail.c_str());
        csv.append_row(
            {std::to_string(r.id), r.pass ? "1" : "0", format_double(r.seconds), r.title});
        arr.push_back({{"id", r.id},
                       {"title", r.title},
                       {"pass", r.pass},
                       {"detail", r.detail},
                       {"seconds", r.seconds}});
        if (!r.pass) ++failures;
    }
    em.set_csv(csv.str());
    em.set_summary({{"criteria", arr}, {"failures", failures}});
    em.write();
    return failures ? 3 : 0;
}

void apply_config_file(Options& opt, const CLI::App& app) {
    if (opt.config_path.empty()) return;
    std::ifstream in(opt.config_path);
    if (!in) throw ConfigError("cannot read config '" + opt.config_path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config JSON malformed: ") + e.what());
    }
    // Flags win over config values: only fill options left at their defaults.
    auto if_unset = [&](const char* flag, auto& slot, const char* key) {
        using T = std::decay_t<decltype(slot)>;
        const CLI::Option* o = app.get_option_no_throw(flag);
        if (j.contains(key) && (!o || o->count() == 0)) slot = j.at(key).get<T>();
    };
    if_unset("--scenario", opt.scenario, "scenario");
    if_unset("--grid", opt.grid_text, "grid");
    if_unset("--eps", opt.eps, "eps");
    if_unset("--region", opt.region_text, "region");
    if_unset("--tol", opt.tol, "tol");
    if_unset("--out", opt.out_dir, "out");
    if_unset("--delta", opt.delta_profile, "delta");
    if_unset("--f", opt.f_expr, "f");
    if_unset("--init", opt.init_text, "init");
    if_unset("--t-end", opt.t_end, "t_end");
    if_unset("--at", opt.at_text, "at");
    if_unset("--exclude", opt.exclude, "exclude");
    if_unset("--samples", opt.samples, "samples");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized pseudo-Riemannian geometry engine: eps-regularized metrics, "
                 "their connections, curvature, geodesics and distributional limits"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", opt.scenario, "scenario name from list-scenarios");
        cmd->add_option("--config", opt.config_path, "JSON config file (flags win)");
        cmd->add_option("--grid", opt.grid_text, "epsilon grid 'emax,emin,count'");
        cmd->add_option("--eps", opt.eps, "single epsilon for pointwise commands");
        cmd->add_option("--region", opt.region_text, "region '[lo,hi]x[lo,hi]@count'");
        cmd->add_option("--tol", opt.tol, "integrator tolerance");
        cmd->add_option("--out", opt.out_dir, "output directory");
        cmd->add_option("--delta", opt.delta_profile,
                        "mollifier profile: bump | gauss | signed-split | <expr in s>");
        cmd->add_option("--f", opt.f_expr, "wave profile override f(x,y)");
        return cmd;
    };

    auto* list = app.add_subcommand("list-scenarios", "print the built-in scenarios");
    list->add_option("--out", opt.out_dir, "output directory");

    add_common(app.add_subcommand("check-metric", "uniform nondegeneracy of det g"));
    add_common(app.add_subcommand("index", "negative-eigenvalue count and its stability"));
    auto* chr = add_common(app.add_subcommand("christoffel", "connection symbols"));
    chr->add_flag("--print", opt.print_symbols, "print nonzero symbols to stdout");
    auto* geo = add_common(app.add_subcommand("geodesic", "integrate a geodesic family"));
    geo->add_option("--init", opt.init_text, "initial data 'u0=-1,x=1,xdot=0,...'");
    geo->add_option("--t-end", opt.t_end, "integration end");
    geo->add_option("--samples", opt.samples, "shared t-grid sample count");
    auto* cur = add_common(app.add_subcommand("curvature", "evaluate curvature at a point"));
    cur->add_option("--at", opt.at_text, "evaluation point 'u=0,x=1,y=1'");
    auto* shd = app.add_subcommand("shadow", "extrapolate a family CSV to eps -> 0");
    shd->add_option("--family", opt.family_path, "family CSV from the geodesic command");
    shd->add_option("--closed-form", opt.closed_form, "'x:1+pos(u);v:2*pos(u)' references");
    shd->add_option("--exclude", opt.exclude, "window |t| < r excluded from comparison");
    shd->add_option("--out", opt.out_dir, "output directory");
    auto* cls = add_common(app.add_subcommand("classify", "asymptotics of det g at a point"));
    cls->add_option("--at", opt.at_text, "evaluation point");
    auto* acc = app.add_subcommand("acceptance", "run the acceptance criteria suite");
    acc->add_option("--out", opt.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* sub = app.get_subcommands().front();
        apply_config_file(opt, *sub);
        const std::string name = sub->get_name();
        if (name == "list-scenarios") return cmd_list_scenarios(opt);
        if (name == "check-metric") return cmd_check_metric(opt);
        if (name == "index") return cmd_index(opt);
        if (name == "christoffel") return cmd_christoffel(opt);
        if (name == "geodesic") return cmd_geodesic(opt);
        if (name == "curvature") return cmd_curvature(opt);
        if (name == "shadow") return cmd_shadow(opt);
        if (name == "classify") return cmd_classify(opt);
        if (name == "acceptance") return cmd_acceptance(opt);
        throw ConfigError("unknown command");
    } catch (const ConfigError& e) {
        std::cerr << json{{"error", "validation"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    } catch (const EvalError& e) {
        std::cerr << json{{"error", "evaluation"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << json{{"error", "numerical"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    }
}
