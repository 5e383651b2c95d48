#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gengeo/report_io.hpp"
#include "gengeo/scenario.hpp"

using namespace gengeo;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

#ifdef GENGEO_CLI_PATH
int run_cli(const std::string& args) {
    const std::string cmd = std::string(GENGEO_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}
#endif

} // namespace

TEST_CASE("scenario registry carries the built-ins") {
    std::vector<std::string> names;
    for (const auto& s : ScenarioRegistry::builtin()) names.push_back(s.name);
    for (const char* want : {"ppwave", "remark35", "minkowski", "sphere2", "example24"})
        CHECK(std::find(names.begin(), names.end(), want) != names.end());
    CHECK_THROWS_AS(ScenarioRegistry::find("nope"), ConfigError);
}

TEST_CASE("scenario JSON round trip") {
    const Scenario& pp = ScenarioRegistry::find("ppwave");
    Scenario back = Scenario::from_json_text(pp.to_json_text());
    CHECK(back.name == pp.name);
    CHECK(back.coordinates == pp.coordinates);
    CHECK(back.components == pp.components);
    CHECK(back.delta_profile == pp.delta_profile);
    // Missing component keys default to zero.
    Scenario sparse = Scenario::from_json_text(
        R"({"label":"s","coords":["a","b"],"components":{"aa":"1"}})");
    auto m = sparse.instantiate();
    CHECK(m.component(1, 1).is_zero());
    CHECK(m.component(0, 1).is_zero());
}

TEST_CASE("component keys resolve by concatenation and underscore") {
    std::vector<std::string> c4 = {"u", "v", "x", "y"};
    CHECK(parse_component_key("uv", c4) == std::pair{0, 1});
    CHECK(parse_component_key("yy", c4) == std::pair{3, 3});
    std::vector<std::string> c2 = {"theta", "phi"};
    CHECK(parse_component_key("theta_phi", c2) == std::pair{0, 1});
    CHECK_THROWS_AS(parse_component_key("qq", c4), ConfigError);
    CHECK_THROWS_AS(parse_component_key("thetaphi", c2), ConfigError);
}

TEST_CASE("profile override rebuilds the wave slot") {
    auto s = ScenarioRegistry::find("ppwave").with_f("x^2 + y^2");
    CHECK(s.components.at("uu") == "(x^2 + y^2)*delta(u)");
    CHECK_THROWS_AS(ScenarioRegistry::find("sphere2").with_f("x"), ConfigError);
}

TEST_CASE("shortest round-trip formatting survives parsing") {
    for (double v : {0.1, 1.0 / 3.0, 2.5e-17, -123456.789, 0.0}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}

#ifdef GENGEO_CLI_PATH

TEST_CASE("cli runs are byte-deterministic") {
    const fs::path a = fs::temp_directory_path() / "gengeo_det_a";
    const fs::path b = fs::temp_directory_path() / "gengeo_det_b";
    fs::remove_all(a);
    fs::remove_all(b);
    const std::string args =
        "geodesic --scenario ppwave --init u0=-1,x=1,y=1 --t-end 1 --grid 0.2,0.05,4 "
        "--samples 51 --out ";
    REQUIRE(run_cli(args + a.string()) == 0);
    REQUIRE(run_cli(args + b.string()) == 0);
    CHECK(read_file(a / "result.csv") == read_file(b / "result.csv"));
    CHECK(read_file(a / "summary.json") == read_file(b / "summary.json"));
    // Manifests agree apart from the wall time.
    auto strip = [](std::string s) {
        const auto pos = s.find("wall_ms");
        REQUIRE(pos != std::string::npos);
        const auto eol = s.find('\n', pos);
        s.erase(pos, eol - pos);
        return s;
    };
    CHECK(strip(read_file(a / "manifest.json")) == strip(read_file(b / "manifest.json")));
}

TEST_CASE("cli exit codes follow the error taxonomy") {
    const std::string out = " --out " + (fs::temp_directory_path() / "gengeo_err").string();
    CHECK(run_cli("check-metric --scenario no-such-scenario" + out) == 1);
    CHECK(run_cli("geodesic --scenario ppwave --t-end 1" + out) == 1);  // missing --init
    CHECK(run_cli("check-metric --scenario remark35 --delta signed-split" + out) == 0);
    CHECK(run_cli("list-scenarios" + out) == 0);
}

#endif
