// scenario.hpp: Scenario configuration, orchestration of all methods, reports and data files

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qdecay/core.hpp"
#include "qdecay/nz.hpp"
#include "qdecay/oracle.hpp"
#include "qdecay/reservoir.hpp"
#include "qdecay/tcl.hpp"

namespace qdecay::scenario {

using json = nlohmann::json;

enum class Method {
    exact,
    tcl_exact,
    tcl_order2,
    tcl_order4,
    nz_exact,
    nz_analytic,
    nz_order2,
    nz_order4,
    markov,
    ansatz,
    oracle,
};

std::string_view to_string(Method m) noexcept;
std::optional<Method> parse_method(std::string_view name) noexcept;
const std::vector<Method>& all_methods();

/// Invalid configuration. line is 1-based in the config text, 0 when unknown.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, std::size_t line)
        : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + message : "config: " + message),
          line_(line)
    {
    }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A numerical failure inside one method.
class MethodFailure : public std::runtime_error {
public:
    MethodFailure(Method m, std::size_t index, const std::string& detail)
        : std::runtime_error(std::string(to_string(m)) + " failed at time index " + std::to_string(index) + ": " +
                             detail),
          method_(m), index_(index)
    {
    }
    Method method() const noexcept { return method_; }
    std::size_t index() const noexcept { return index_; }

private:
    Method method_;
    std::size_t index_;
};

struct Tolerances {
    double breakdown_threshold{default_breakdown_threshold};
    double constraint{1e-12};
    double identity{1e-6};
    double choi{1e-12};
    double contractivity{1e-10};
    double hermitian{1e-14};
    double trace{1e-12};
};

struct OracleSettings {
    std::size_t n_modes{2001};
    double cutoff_width{20.0};
    double omega0{0.0};
};

struct ScenarioConfig {
    std::string name;
    json correlation_spec;  ///< as given, echoed into the report
    CorrelationFunction correlation;
    TimeGrid grid;
    QubitState initial;
    std::vector<Method> methods;
    OracleSettings oracle;
    std::optional<MarkovParams> markov;  ///< unset: Born-Markov limit of the correlation
    std::filesystem::path output_dir;
    Tolerances tolerances;

    bool wants(Method m) const;
};

/// Command-line overrides applied on top of the config document.
struct Overrides {
    std::optional<double> step;
    std::optional<double> t_end;
    std::optional<std::filesystem::path> output_dir;
};

std::vector<std::string> preset_names();
/// Preset document; throws ConfigError for unknown names.
json preset(std::string_view name);

/// Validates a config document. text, when given, is used to attach line numbers.
ScenarioConfig parse_config(const json& doc, std::string_view text = {});
/// Parses JSON text (syntax errors carry line numbers), optionally layered over a preset.
ScenarioConfig load_config(std::string_view text, const std::optional<std::string>& base_preset,
                           const Overrides& overrides);
ScenarioConfig load_preset(std::string_view name, const Overrides& overrides);

struct Deviation {
    double rho11{0.0};
    double rho00{0.0};
    double re_rho10{0.0};
    double im_rho10{0.0};
    std::size_t compared_points{0};

    double max() const noexcept;
};

/// Entrywise max |a - b| over indices where both trajectories are valid and finite.
Deviation compare(const Trajectory& a, const Trajectory& b);

struct ScenarioResult {
    AmplitudeSolution amplitude;
    ComplexSignal correlation_samples;
    std::map<Method, Trajectory> trajectories;  ///< requested methods only
    MemoryKernel exact_kernel;
    TclCoefficients tcl_exact;
    std::optional<TclCoefficients> tcl_order2;
    std::optional<TclCoefficients> tcl_order4;
    std::optional<OracleRun> oracle_run;
    json report;
};

ScenarioResult run_scenario(const ScenarioConfig& config);

enum class Output { trajectories = 1, kernel = 2, rates = 4, report = 8, all = 15 };

/// Writes the selected files into config.output_dir (created if missing).
void write_outputs(const ScenarioConfig& config, const ScenarioResult& result, int selection);

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory);
void write_kernel_csv(const std::filesystem::path& path, const MemoryKernel& kernel);
void write_rates_csv(const std::filesystem::path& path, const TclCoefficients& exact,
                     const TclCoefficients* order2, const TclCoefficients* order4);

struct CheckResult {
    std::string name;
    bool passed{false};
    double value{0.0};
    double tolerance{0.0};
    std::string detail;
};

struct VerifyOutcome {
    std::vector<CheckResult> checks;
    bool passed() const;
};

VerifyOutcome verify(const ScenarioConfig& config);

}  // namespace qdecay::scenario
