// test_scenario.cpp: Config validation, orchestration, reports, CSV files and verification

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "qdecay/scenario.hpp"

using namespace qdecay;
namespace sc = qdecay::scenario;
using sc::json;

namespace {

std::filesystem::path scratch(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("qdecay_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t config_error_line(const std::string& text)
{
    try {
        sc::load_config(text, std::nullopt, {});
    } catch (const sc::ConfigError& e) {
        return e.line();
    }
    return 0;
}

const char* small_config = R"({
  "name": "small",
  "correlation": {"type": "lorentzian", "gamma0": 1.0, "lambda": 1.0},
  "grid": {"h": 0.01, "t_end": 6},
  "initial_state": {"rho11": 0.75, "re_rho10": 0.3, "im_rho10": 0.2},
  "methods": ["exact", "tcl-exact", "nz-exact", "nz-order2", "markov"]
})";

}  // namespace

TEST_CASE("method names round-trip")
{
    for (sc::Method m : sc::all_methods()) CHECK(sc::parse_method(sc::to_string(m)) == m);
    CHECK_FALSE(sc::parse_method("lindblad").has_value());
    CHECK(sc::all_methods().size() == 11);
}

TEST_CASE("presets parse and carry the three coupling regimes")
{
    for (const auto& name : sc::preset_names()) {
        const sc::ScenarioConfig c = sc::load_preset(name, {});
        CHECK(c.grid.step() == 1e-3);
        CHECK(c.grid.intervals() == 10000);
        CHECK(c.methods.size() == 11);
    }
    CHECK(sc::load_preset("lorentzian-verystrong", {}).correlation.as_lorentzian()->gamma0 == 5.0);
    CHECK_THROWS_AS(sc::preset("lorentzian-medium"), sc::ConfigError);
}

TEST_CASE("overrides replace grid and output directory")
{
    sc::Overrides o{0.01, 2.0, std::filesystem::path("/tmp/x")};
    const sc::ScenarioConfig c = sc::load_preset("lorentzian-weak", o);
    CHECK(c.grid.step() == 0.01);
    CHECK(c.grid.intervals() == 200);
    CHECK(c.output_dir == "/tmp/x");
}

TEST_CASE("relative units scale rates and times by lambda")
{
    const std::string text = R"({"correlation": {"type": "lorentzian", "gamma0": 0.5, "lambda": 2},
      "grid": {"h": 0.02, "t_end": 2}, "initial_state": {"rho11": 1}, "methods": ["exact"]})";
    const sc::ScenarioConfig rel = sc::load_config(text, std::nullopt, {});
    CHECK(rel.correlation.as_lorentzian()->gamma0 == 1.0);
    CHECK(rel.grid.step() == 0.01);
    CHECK(rel.grid.end() == doctest::Approx(1.0));

    json doc = json::parse(text);
    doc["units"] = "absolute";
    const sc::ScenarioConfig abs = sc::parse_config(doc);
    CHECK(abs.correlation.as_lorentzian()->gamma0 == 0.5);
    CHECK(abs.grid.step() == 0.02);
}

TEST_CASE("invalid configs report the offending line")
{
    CHECK(config_error_line("{\n  \"grid\": {\n    \"h\": 0.1,\n  }\n}") == 4);
    CHECK(config_error_line(R"({
  "correlation": {"type": "lorentzian", "gamma0": 1},
  "grid": {"h": 0.01, "t_end": 1},
  "initial_state": {
    "rho11": 1.5
  },
  "methods": ["exact"]
})") == 5);
    CHECK(config_error_line(R"({
  "correlation": {"type": "lorentzian", "gamma0": -1},
  "grid": {"h": 0.01, "t_end": 1},
  "initial_state": {"rho11": 1},
  "methods": ["exact"]
})") == 2);
    CHECK(config_error_line(R"({
  "correlation": {"type": "lorentzian", "gamma0": 1},
  "grid": {"h": 0.01, "t_end": 1},
  "initial_state": {"rho11": 1},
  "methods": []
})") == 5);
}

TEST_CASE("config invariants are enforced")
{
    auto fails = [](const std::string& patch) {
        json doc = json::parse(small_config);
        doc.merge_patch(json::parse(patch));
        CHECK_THROWS_AS(sc::parse_config(doc), sc::ConfigError);
    };
    fails(R"({"initial_state": {"rho11": 0.5, "re_rho10": 0.6}})");
    fails(R"({"initial_state": {"rho11": -0.1}})");
    fails(R"({"grid": {"h": 0.03, "t_end": 1}})");
    fails(R"({"grid": {"h": 0}})");
    fails(R"({"methods": ["exact", "exact"]})");
    fails(R"({"methods": ["exact", "lindblad"]})");
    fails(R"({"color": "blue"})");
    fails(R"({"correlation": {"type": "gaussian"}})");
    fails(R"({"correlation": {"type": "tabulated", "step": 0.01, "re": [1, 0.5]}})");
    fails(R"({"correlation": {"type": "tabulated", "step": 0.02, "re": [1, 0.5, 0.2, 0.1]}})");
    fails(R"({"markov": {"gamma": -1}})");
    fails(R"({"oracle": {"n_modes": 1}})");

    json doc = json::parse(small_config);
    doc["correlation"] = {{"type", "modes"}, {"modes", {{{"g", 0.3}, {"omega", 0.0}}}}};
    doc["methods"] = {"exact", "nz-analytic"};
    CHECK_THROWS_AS(sc::parse_config(doc), sc::ConfigError);
    doc["methods"] = {"exact", "oracle"};
    CHECK_NOTHROW(sc::parse_config(doc));
    doc["correlation"] = {{"type", "tabulated"}, {"step", 0.01}, {"re", std::vector<double>(601, 0.0)}};
    CHECK_THROWS_AS(sc::parse_config(doc), sc::ConfigError);
}

TEST_CASE("zero correlation keeps the population constant")
{
    json doc = json::parse(small_config);
    doc["correlation"] = {{"type", "tabulated"}, {"step", 0.01}, {"re", std::vector<double>(601, 0.0)}};
    doc["methods"] = {"exact", "nz-exact", "tcl-exact", "markov", "ansatz", "nz-order4", "tcl-order4"};
    const sc::ScenarioConfig c = sc::parse_config(doc);
    const sc::ScenarioResult r = sc::run_scenario(c);
    for (const auto& [m, t] : r.trajectories) {
        for (const QubitState& s : t.states) CHECK(s.rho11 == 0.75);
    }
    const sc::VerifyOutcome v = sc::verify(c);
    CHECK(v.passed());
    for (const auto& check : v.checks) CHECK(check.value == 0.0);
}

TEST_CASE("report contains deviations, breakdown and residuals")
{
    const sc::ScenarioConfig c = sc::load_config(small_config, std::nullopt, {});
    const sc::ScenarioResult r = sc::run_scenario(c);
    const json& rep = r.report;
    CHECK(rep.at("breakdown_time").get<double>() == doctest::Approx(4.71239).epsilon(1e-3));
    CHECK(rep.at("deviations").size() == 4);
    for (const auto& [pair, d] : rep.at("deviations").items()) {
        CHECK(d.at("max").get<double>() >= 0.0);
    }
    CHECK(rep.at("deviations").at("nz-exact vs exact").at("max").get<double>() < 1e-3);
    CHECK(rep.at("min_choi_eigenvalue_exact").get<double>() >= -1e-12);
    CHECK(rep.at("min_population").contains("markov"));
    CHECK(rep.at("identity_residuals").at("k1_plus_k2_minus_2f1").get<double>() < 1e-12);
}

TEST_CASE("CSV files have one row per grid point and reproduce the report")
{
    sc::ScenarioConfig c = sc::load_config(small_config, std::nullopt, {});
    c.output_dir = scratch("csv");
    const sc::ScenarioResult r = sc::run_scenario(c);
    sc::write_outputs(c, r, static_cast<int>(sc::Output::all));

    auto load = [&](const std::string& name) {
        std::ifstream in(c.output_dir / name);
        std::string line;
        std::getline(in, line);
        CHECK(line == "t,rho11,rho00,re_rho10,im_rho10");
        std::vector<std::array<double, 5>> rows;
        while (std::getline(in, line)) {
            std::array<double, 5> row{};
            std::istringstream s(line);
            std::string cell;
            for (double& v : row) {
                std::getline(s, cell, ',');
                v = std::stod(cell);
            }
            rows.push_back(row);
        }
        return rows;
    };
    const auto exact = load("exact.csv");
    const auto nz = load("nz-exact.csv");
    REQUIRE(exact.size() == c.grid.size());
    for (std::size_t i = 0; i < exact.size(); ++i) CHECK(exact[i][0] == c.grid.time(i));
    double dev = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        for (int k = 1; k < 5; ++k) dev = std::max(dev, std::abs(exact[i][k] - nz[i][k]));
    }
    CHECK(dev == r.report.at("deviations").at("nz-exact vs exact").at("max").get<double>());

    const std::string rates = read_file(c.output_dir / "tcl_rates.csv");
    CHECK(rates.rfind("t,gamma,S\n", 0) == 0);
    CHECK(rates.find("nan") != std::string::npos);
    CHECK(rates.find('\r') == std::string::npos);
    CHECK(read_file(c.output_dir / "kernel.csv").rfind("t,epsilon,k1,k2\n", 0) == 0);
    CHECK(json::parse(read_file(c.output_dir / "report.json")) == r.report);
}

TEST_CASE("outputs are deterministic")
{
    sc::ScenarioConfig c = sc::load_config(small_config, std::nullopt, {});
    c.output_dir = scratch("det_a");
    sc::write_outputs(c, sc::run_scenario(c), static_cast<int>(sc::Output::all));
    const auto first = c.output_dir;
    c.output_dir = scratch("det_b");
    sc::write_outputs(c, sc::run_scenario(c), static_cast<int>(sc::Output::all));
    for (const char* f : {"exact.csv", "nz-exact.csv", "tcl-exact.csv", "kernel.csv", "tcl_rates.csv", "report.json"}) {
        CHECK(read_file(first / f) == read_file(c.output_dir / f));
    }
}

TEST_CASE("rates file gains perturbative columns when requested")
{
    json doc = json::parse(small_config);
    doc["methods"] = {"exact", "tcl-order2", "tcl-order4"};
    sc::ScenarioConfig c = sc::parse_config(doc);
    c.output_dir = scratch("rates");
    sc::write_outputs(c, sc::run_scenario(c), static_cast<int>(sc::Output::rates));
    CHECK(read_file(c.output_dir / "tcl_rates.csv").rfind("t,gamma,S,gamma2,S2,gamma4,S4\n", 0) == 0);
    CHECK_FALSE(std::filesystem::exists(c.output_dir / "exact.csv"));
}

TEST_CASE("verify flags a correlation with non-zero Im f(0)")
{
    json doc = json::parse(small_config);
    std::vector<double> re(601, 0.0), im(601, 0.0);
    re[0] = 0.1;
    im[0] = 0.05;
    doc["correlation"] = {{"type", "tabulated"}, {"step", 0.01}, {"re", re}, {"im", im}};
    const sc::VerifyOutcome v = sc::verify(sc::parse_config(doc));
    CHECK_FALSE(v.passed());
    for (const auto& check : v.checks) CHECK(check.passed == (check.name != "hermitian-symmetry"));
}

TEST_CASE("verify passes for the weak preset")
{
    const sc::ScenarioConfig c = sc::load_preset("lorentzian-weak", sc::Overrides{std::nullopt, 2.0, std::nullopt});
    const sc::VerifyOutcome v = sc::verify(c);
    CHECK(v.passed());
    CHECK(v.checks.size() == 7);
}

TEST_CASE("numeric failures name the method and index")
{
    json doc = json::parse(small_config);
    doc["methods"] = {"exact", "markov"};
    doc["markov"] = {{"gamma", 0.0}};
    CHECK_NOTHROW(sc::run_scenario(sc::parse_config(doc)));

    const sc::MethodFailure f(sc::Method::nz_exact, 42, "boom");
    CHECK(std::string(f.what()).find("nz-exact") != std::string::npos);
    CHECK(std::string(f.what()).find("42") != std::string::npos);
}

TEST_CASE("compare reports a deviation per requested pair")
{
    const sc::Deviation d = sc::compare(
        apply_map(ComplexSignal(TimeGrid(1.0, 1), cplx(1.0, 0.0)), QubitState{0.5, cplx(0.1, 0.0)}),
        apply_map(ComplexSignal(TimeGrid(1.0, 1), std::vector<cplx>{{1.0, 0.0}, {0.5, 0.0}}),
                  QubitState{0.5, cplx(0.1, 0.0)}));
    CHECK(d.rho11 == doctest::Approx(0.375));
    CHECK(d.re_rho10 == doctest::Approx(0.05));
    CHECK(d.compared_points == 2);
    CHECK(d.max() == d.rho11);
}
