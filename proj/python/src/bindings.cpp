// Python bindings for the main operations: expression evaluation, metric
// diagnostics, connection symbols, geodesic families and shadow
// extrapolation. Thin conversion layer; all numerics live in the core.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gengeo/acceptance.hpp"
#include "gengeo/curvature.hpp"
#include "gengeo/scenario.hpp"
#include "gengeo/shadow.hpp"

namespace py = pybind11;
using namespace gengeo;

namespace {

std::shared_ptr<DeltaNet> make_net(const std::string& profile, const std::string& radius_rule) {
    return std::make_shared<DeltaNet>(DeltaProfile::named(profile), radius_rule);
}

Scenario resolve(const std::string& name, const std::string& delta, const std::string& f) {
    Scenario s = ScenarioRegistry::find(name);
    if (!delta.empty()) s = s.with_delta(delta);
    if (!f.empty()) s = s.with_f(f);
    return s;
}

EpsilonGrid grid_from(const std::vector<double>& values) {
    return values.empty() ? EpsilonGrid::geometric(0.2, 0.0125, 5) : EpsilonGrid(values);
}

Region region_from(const std::vector<std::pair<double, double>>& box,
                   const std::vector<int>& samples) {
    std::vector<std::array<double, 2>> b;
    for (const auto& [lo, hi] : box) b.push_back({lo, hi});
    if (samples.empty()) return Region(b);
    return Region(b, samples);
}

py::dict invertibility_to_dict(const InvertibilityReport& rep) {
    py::dict d;
    d["decision"] = rep.decision;
    d["exponent"] = rep.exponent ? py::object(py::int_(*rep.exponent)) : py::none();
    d["worst_point"] = rep.worst_point;
    d["inf_table"] = rep.inf_table;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "eps-regularized pseudo-Riemannian geometry engine";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<EvalError>(m, "EvalError", PyExc_ArithmeticError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    m.def("geometric_grid", [](double e_max, double e_min, int count) {
        auto g = EpsilonGrid::geometric(e_max, e_min, count);
        return std::vector<double>(g.values().begin(), g.values().end());
    });

    m.def(
        "evaluate",
        [](const std::string& text, const std::map<std::string, double>& vars, double eps,
           const std::string& delta_profile) {
            Bindings b;
            b.eps = eps;
            auto net = make_net(delta_profile, "eps");
            b.delta = net.get();
            for (const auto& [k, v] : vars) b.set(k, v);
            return parse_expr(text).evaluate(b);
        },
        py::arg("text"), py::arg("vars") = std::map<std::string, double>{},
        py::arg("eps") = 1.0, py::arg("delta_profile") = "bump");

    m.def("differentiate", [](const std::string& text, const std::string& var) {
        return parse_expr(text).differentiate(var).to_string();
    });

    m.def("list_scenarios", [] {
        std::vector<std::string> names;
        for (const auto& s : ScenarioRegistry::builtin()) names.push_back(s.name);
        return names;
    });

    m.def("scenario_json",
          [](const std::string& name) { return ScenarioRegistry::find(name).to_json_text(); });

    m.def(
        "check_nondegenerate",
        [](const std::string& scenario, const std::string& delta, const std::string& f,
           const std::vector<double>& grid) {
            Scenario s = resolve(scenario, delta, f);
            return invertibility_to_dict(
                s.instantiate().check_nondegenerate(s.default_region(), grid_from(grid)));
        },
        py::arg("scenario"), py::arg("delta") = "", py::arg("f") = "",
        py::arg("grid") = std::vector<double>{});

    m.def(
        "compute_index",
        [](const std::string& scenario, const std::vector<std::pair<double, double>>& box,
           const std::vector<int>& samples, const std::vector<double>& grid) {
            Scenario s = resolve(scenario, "", "");
            Region region = box.empty() ? s.default_region() : region_from(box, samples);
            auto rep = s.instantiate().compute_index(region, grid_from(grid));
            py::dict d;
            d["index"] = rep.index;
            d["stable"] = rep.stable;
            return d;
        },
        py::arg("scenario"), py::arg("box") = std::vector<std::pair<double, double>>{},
        py::arg("samples") = std::vector<int>{}, py::arg("grid") = std::vector<double>{});

    m.def(
        "metric_eigenvalues",
        [](const std::string& scenario, const std::vector<double>& point, double eps) {
            auto ev = resolve(scenario, "", "").instantiate().evaluate(point, eps);
            py::dict d;
            d["det"] = ev.det;
            d["eigenvalues"] = ev.eigenvalues;
            return d;
        },
        py::arg("scenario"), py::arg("point"), py::arg("eps"));

    m.def(
        "inverse_metric_at",
        [](const std::string& scenario, const std::vector<double>& point, double eps) {
            auto metric = resolve(scenario, "", "").instantiate();
            auto flat = metric.inverse_at(point, eps);
            const int d = metric.dim();
            std::vector<std::vector<double>> rows(d, std::vector<double>(d));
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) rows[i][j] = flat[i * d + j];
            return rows;
        },
        py::arg("scenario"), py::arg("point"), py::arg("eps"));

    m.def(
        "christoffel_symbols",
        [](const std::string& scenario, const std::string& f) {
            auto gamma = christoffel(resolve(scenario, "", f).instantiate());
            std::vector<py::dict> out;
            for (const auto& [k, i, j] : gamma.nonzero()) {
                if (j < i) continue;
                py::dict d;
                d["k"] = k;
                d["i"] = i;
                d["j"] = j;
                d["expr"] = gamma.symbol(k, i, j).to_string();
                out.push_back(std::move(d));
            }
            return out;
        },
        py::arg("scenario"), py::arg("f") = "");

    m.def(
        "geodesic_family",
        [](const std::string& scenario, double t0, const std::vector<double>& position,
           const std::vector<double>& velocity, double t_end, const std::vector<double>& grid,
           double tol, int samples, const std::string& f) {
            auto metric = resolve(scenario, "", f).instantiate();
            auto gamma = christoffel(metric);
            GeodesicInit init{t0, position, velocity};
            auto fam = solve_family(gamma, init, t_end, grid_from(grid), tol, samples);
            py::dict d;
            d["t"] = fam.t;
            std::vector<py::dict> members;
            for (const auto& traj : fam.members) {
                py::dict mbr;
                mbr["eps"] = traj.eps;
                mbr["positions"] = traj.positions;
                mbr["velocities"] = traj.velocities;
                members.push_back(std::move(mbr));
            }
            d["members"] = members;
            return d;
        },
        py::arg("scenario"), py::arg("t0"), py::arg("position"), py::arg("velocity"),
        py::arg("t_end"), py::arg("grid") = std::vector<double>{}, py::arg("tol") = 1e-10,
        py::arg("samples") = 201, py::arg("f") = "");

    m.def("estimate_shadow", [](const std::vector<std::pair<double, double>>& samples) {
        auto est = estimate_shadow(samples);
        py::dict d;
        d["limit"] = est.limit;
        d["order"] = est.fitted_order;
        d["trustworthy"] = est.trustworthy;
        return d;
    });

    m.def(
        "pair_delta_density",
        [](const std::string& field, const std::string& density, double lo, double hi,
           double eps, const std::string& delta_profile) {
            auto net = make_net(delta_profile, "eps");
            auto f = FieldNet::from_expr(parse_expr(field), {"t"}, {}, net, field);
            auto phi = TestDensity::parse(density, "t", lo, hi);
            return pair_density(f, phi, eps);
        },
        py::arg("field"), py::arg("density"), py::arg("lo"), py::arg("hi"), py::arg("eps"),
        py::arg("delta_profile") = "bump");

    m.def(
        "curvature_at",
        [](const std::string& scenario, const std::vector<double>& point, double eps,
           const std::string& f) {
            auto metric = resolve(scenario, "", f).instantiate();
            auto bundle = curvature(metric, christoffel(metric));
            Bindings b = metric.make_bindings(point, eps);
            const int d = metric.dim();
            std::vector<std::vector<double>> ricci(d, std::vector<double>(d));
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) ricci[i][j] = bundle.ricci(i, j).evaluate(b);
            py::dict out;
            out["ricci"] = ricci;
            out["scalar"] = bundle.scalar().evaluate(b);
            return out;
        },
        py::arg("scenario"), py::arg("point"), py::arg("eps"), py::arg("f") = "");

    m.def("run_acceptance", [] {
        std::vector<py::dict> out;
        for (const auto& r : run_acceptance_suite()) {
            py::dict d;
            d["id"] = r.id;
            d["title"] = r.title;
            d["pass"] = r.pass;
            d["detail"] = r.detail;
            d["seconds"] = r.seconds;
            out.push_back(std::move(d));
        }
        return out;
    });
}
