// scenario.cpp: Config parsing, method orchestration, CSV/JSON emission and verification

#include "qdecay/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "qdecay/lorentzian.hpp"

namespace qdecay::scenario {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 11> method_names{{
    {Method::exact, "exact"},
    {Method::tcl_exact, "tcl-exact"},
    {Method::tcl_order2, "tcl-order2"},
    {Method::tcl_order4, "tcl-order4"},
    {Method::nz_exact, "nz-exact"},
    {Method::nz_analytic, "nz-analytic"},
    {Method::nz_order2, "nz-order2"},
    {Method::nz_order4, "nz-order4"},
    {Method::markov, "markov"},
    {Method::ansatz, "ansatz"},
    {Method::oracle, "oracle"},
}};

// 1-based line of the key reached by searching for each quoted key in turn; 0 if any is absent.
std::size_t line_of(std::string_view text, const std::vector<std::string>& path)
{
    if (text.empty() || path.empty()) return 0;
    std::size_t pos = 0;
    for (const auto& key : path) {
        pos = text.find("\"" + key + "\"", pos);
        if (pos == std::string_view::npos) return 0;
    }
    return static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n')) + 1;
}

// Cursor over one JSON object that reports errors with the line of the offending key.
class Section {
public:
    Section(const json& doc, std::string_view text, std::vector<std::string> path)
        : doc_(doc), text_(text), path_(std::move(path))
    {
        if (!doc_.is_object()) {
            throw ConfigError(dotted() + " must be an object", line_of(text_, path_));
        }
    }

    [[noreturn]] void fail(const std::string& key, const std::string& message) const
    {
        auto path = path_;
        path.push_back(key);
        std::size_t line = line_of(text_, path);
        if (line == 0) line = line_of(text_, path_);
        const std::string prefix = path_.empty() ? "" : dotted() + ".";
        throw ConfigError(prefix + key + ": " + message, line);
    }

    bool has(const std::string& key) const { return doc_.contains(key); }
    const json& raw(const std::string& key) const { return doc_.at(key); }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) const
    {
        if (!doc_.contains(key)) {
            if (fallback) return *fallback;
            fail(key, "is required");
        }
        const json& v = doc_.at(key);
        if (!v.is_number()) fail(key, "must be a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(key, "must be finite");
        return d;
    }

    double positive(const std::string& key, std::optional<double> fallback = std::nullopt) const
    {
        const double d = number(key, fallback);
        if (!(d > 0.0)) fail(key, "must be positive");
        return d;
    }

    std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) const
    {
        if (!doc_.contains(key)) {
            if (fallback) return *fallback;
            fail(key, "is required");
        }
        if (!doc_.at(key).is_string()) fail(key, "must be a string");
        return doc_.at(key).get<std::string>();
    }

    void only(std::initializer_list<std::string_view> allowed) const
    {
        for (const auto& item : doc_.items()) {
            if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
                fail(item.key(), "unknown key");
            }
        }
    }

    Section child(const std::string& key) const
    {
        if (!doc_.contains(key)) fail(key, "is required");
        auto path = path_;
        path.push_back(key);
        return Section(doc_.at(key), text_, std::move(path));
    }

private:
    std::string dotted() const
    {
        std::string out = path_.empty() ? "document" : "";
        for (std::size_t i = 0; i < path_.size(); ++i) out += (i ? "." : "") + path_[i];
        return out;
    }

    const json& doc_;
    std::string_view text_;
    std::vector<std::string> path_;
};

std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json null_if_nan(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class F>
auto guarded(Method m, F&& body)
{
    try {
        return body();
    } catch (const NumericError& e) {
        throw MethodFailure(m, e.index(), e.what());
    } catch (const std::invalid_argument& e) {
        throw MethodFailure(m, 0, e.what());
    }
}

}  // namespace

std::string_view to_string(Method m) noexcept
{
    for (const auto& [method, name] : method_names) {
        if (method == m) return name;
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept
{
    for (const auto& [method, n] : method_names) {
        if (n == name) return method;
    }
    return std::nullopt;
}

const std::vector<Method>& all_methods()
{
    static const std::vector<Method> methods = [] {
        std::vector<Method> out;
        for (const auto& entry : method_names) out.push_back(entry.first);
        return out;
    }();
    return methods;
}

bool ScenarioConfig::wants(Method m) const { return std::find(methods.begin(), methods.end(), m) != methods.end(); }

std::vector<std::string> preset_names() { return {"lorentzian-weak", "lorentzian-strong", "lorentzian-verystrong"}; }

json preset(std::string_view name)
{
    double gamma0 = 0.0;
    json initial;
    if (name == "lorentzian-weak") {
        gamma0 = 0.2;
        initial = {{"rho11", 0.75}, {"re_rho10", 0.3}, {"im_rho10", 0.2}};
    } else if (name == "lorentzian-strong") {
        gamma0 = 1.0;
        initial = {{"rho11", 0.75}, {"re_rho10", 0.3}, {"im_rho10", 0.2}};
    } else if (name == "lorentzian-verystrong") {
        gamma0 = 5.0;
        initial = {{"rho11", 1.0}, {"re_rho10", 0.0}, {"im_rho10", 0.0}};
    } else {
        throw ConfigError("unknown preset '" + std::string(name) + "'", 0);
    }
    json methods = json::array();
    for (Method m : all_methods()) methods.push_back(std::string(to_string(m)));
    return json{
        {"name", std::string(name)},
        {"units", "relative"},
        {"correlation", {{"type", "lorentzian"}, {"gamma0", gamma0}, {"lambda", 1.0}}},
        {"grid", {{"h", 1e-3}, {"t_end", 10.0}}},
        {"initial_state", initial},
        {"methods", methods},
        {"oracle", {{"n_modes", 2001}, {"cutoff_width", 20.0}, {"omega0", 0.0}}},
        {"output_dir", "out/" + std::string(name)},
    };
}

ScenarioConfig parse_config(const json& doc, std::string_view text)
{
    const Section root(doc, text, {});
    root.only({"name", "units", "correlation", "grid", "initial_state", "methods", "oracle", "markov", "output_dir",
               "tolerances", "preset"});

    const std::string units = root.string("units", "relative");
    if (units != "relative" && units != "absolute") root.fail("units", "must be 'relative' or 'absolute'");
    const bool relative = units == "relative";

    // Correlation function; in relative units rates are multiples of lambda and times of 1/lambda.
    const Section corr = root.child("correlation");
    const std::string type = corr.string("type");
    double scale = 1.0;
    std::optional<CorrelationFunction> correlation;
    std::optional<json> table_spec;
    if (type == "lorentzian") {
        corr.only({"type", "gamma0", "lambda"});
        const double lambda = corr.positive("lambda", 1.0);
        const double gamma0 = corr.positive("gamma0");
        if (relative) scale = lambda;
        correlation = CorrelationFunction::lorentzian(LorentzianParams{relative ? gamma0 * lambda : gamma0, lambda});
    } else if (type == "modes") {
        corr.only({"type", "omega0", "modes"});
        ModeSet set{corr.number("omega0", 0.0), {}};
        if (!corr.has("modes") || !corr.raw("modes").is_array()) corr.fail("modes", "must be an array");
        for (const json& m : corr.raw("modes")) {
            if (!m.is_object() || !m.contains("g") || !m.contains("omega") || !m.at("omega").is_number()) {
                corr.fail("modes", "entries need numeric 'g' (or [re, im]) and 'omega'");
            }
            const json& g = m.at("g");
            cplx coupling;
            if (g.is_number()) {
                coupling = cplx(g.get<double>(), 0.0);
            } else if (g.is_array() && g.size() == 2 && g[0].is_number() && g[1].is_number()) {
                coupling = cplx(g[0].get<double>(), g[1].get<double>());
            } else {
                corr.fail("modes", "coupling 'g' must be a number or [re, im]");
            }
            set.modes.push_back(Mode{coupling, m.at("omega").get<double>()});
        }
        try {
            correlation = CorrelationFunction::discrete(std::move(set));
        } catch (const std::invalid_argument& e) {
            corr.fail("modes", e.what());
        }
    } else if (type == "tabulated") {
        corr.only({"type", "step", "re", "im"});
        table_spec = doc.at("correlation");
    } else {
        corr.fail("type", "must be 'lorentzian', 'modes' or 'tabulated'");
    }

    const Section grid_section = root.child("grid");
    grid_section.only({"h", "t_end"});
    const double h = grid_section.positive("h") / scale;
    const double t_end = grid_section.positive("t_end") / scale;
    if (t_end < h) grid_section.fail("t_end", "must cover at least one step");
    const double intervals = std::round(t_end / h);
    if (std::abs(intervals * h - t_end) > 1e-9 * t_end) {
        grid_section.fail("t_end", "must be an integer multiple of h");
    }
    if (intervals > 2e6) grid_section.fail("h", "grid has too many points");
    const TimeGrid grid(h, static_cast<std::size_t>(intervals));

    if (table_spec) {
        const double step = corr.positive("step");
        const json& re = table_spec->contains("re") ? table_spec->at("re") : json();
        if (!re.is_array() || re.empty()) corr.fail("re", "must be a non-empty array of numbers");
        std::vector<cplx> values(re.size());
        for (std::size_t i = 0; i < re.size(); ++i) {
            if (!re[i].is_number()) corr.fail("re", "must contain numbers only");
            values[i] = cplx(re[i].get<double>(), 0.0);
        }
        if (table_spec->contains("im")) {
            const json& im = table_spec->at("im");
            if (!im.is_array() || im.size() != re.size()) corr.fail("im", "must match the length of 're'");
            for (std::size_t i = 0; i < im.size(); ++i) {
                if (!im[i].is_number()) corr.fail("im", "must contain numbers only");
                values[i] += cplx(0.0, im[i].get<double>());
            }
        }
        if (values.size() < 2) corr.fail("re", "needs at least two samples");
        if (step > grid.step() * (1.0 + 1e-12)) corr.fail("step", "tabulation must be at least as fine as the grid");
        const TimeGrid table_grid(step, values.size() - 1);
        if (table_grid.end() < grid.end() * (1.0 - 1e-12)) corr.fail("re", "tabulation does not cover the time grid");
        try {
            correlation = CorrelationFunction::tabulated(ComplexSignal(table_grid, std::move(values)));
        } catch (const std::invalid_argument& e) {
            corr.fail("re", e.what());
        }
    }

    const Section init = root.child("initial_state");
    init.only({"rho11", "re_rho10", "im_rho10"});
    QubitState initial{init.number("rho11"), cplx(init.number("re_rho10", 0.0), init.number("im_rho10", 0.0))};
    if (initial.rho11 < 0.0 || initial.rho11 > 1.0) init.fail("rho11", "must lie in [0, 1]");
    if (std::norm(initial.rho10) > initial.rho11 * initial.rho00() + 1e-12) {
        init.fail("re_rho10", "coherence violates |rho10|^2 <= rho11 (1 - rho11)");
    }

    std::vector<Method> methods;
    if (!root.has("methods") || !root.raw("methods").is_array() || root.raw("methods").empty()) {
        root.fail("methods", "must be a non-empty array");
    }
    for (const json& m : root.raw("methods")) {
        if (!m.is_string()) root.fail("methods", "entries must be strings");
        const auto parsed = parse_method(m.get<std::string>());
        if (!parsed) root.fail("methods", "unknown method '" + m.get<std::string>() + "'");
        if (std::find(methods.begin(), methods.end(), *parsed) != methods.end()) {
            root.fail("methods", "duplicate method '" + m.get<std::string>() + "'");
        }
        methods.push_back(*parsed);
    }

    OracleSettings oracle;
    if (root.has("oracle")) {
        const Section o = root.child("oracle");
        o.only({"n_modes", "cutoff_width", "omega0"});
        const double n = o.number("n_modes", static_cast<double>(oracle.n_modes));
        if (n < 2.0 || n != std::floor(n)) o.fail("n_modes", "must be an integer >= 2");
        oracle.n_modes = static_cast<std::size_t>(n);
        oracle.cutoff_width = o.positive("cutoff_width", oracle.cutoff_width);
        oracle.omega0 = o.number("omega0", oracle.omega0);
    }
    const bool wants_oracle = std::find(methods.begin(), methods.end(), Method::oracle) != methods.end();
    if (wants_oracle && !correlation->as_lorentzian() && !correlation->as_modes()) {
        root.fail("methods", "oracle needs a lorentzian or modes correlation");
    }
    if (std::find(methods.begin(), methods.end(), Method::nz_analytic) != methods.end() &&
        !correlation->as_lorentzian()) {
        root.fail("methods", "nz-analytic needs a lorentzian correlation");
    }

    std::optional<MarkovParams> markov;
    if (root.has("markov")) {
        const Section m = root.child("markov");
        m.only({"gamma", "shift"});
        markov = MarkovParams{m.number("gamma") * scale, m.number("shift", 0.0) * scale};
        if (markov->gamma < 0.0) m.fail("gamma", "must be non-negative");
    }

    Tolerances tol;
    if (root.has("tolerances")) {
        const Section t = root.child("tolerances");
        t.only({"breakdown_threshold", "constraint", "identity", "choi", "contractivity", "hermitian", "trace"});
        tol.breakdown_threshold = t.positive("breakdown_threshold", tol.breakdown_threshold);
        tol.constraint = t.positive("constraint", tol.constraint);
        tol.identity = t.positive("identity", tol.identity);
        tol.choi = t.positive("choi", tol.choi);
        tol.contractivity = t.positive("contractivity", tol.contractivity);
        tol.hermitian = t.positive("hermitian", tol.hermitian);
        tol.trace = t.positive("trace", tol.trace);
    }

    return ScenarioConfig{root.string("name", "scenario"),
                          doc.at("correlation"),
                          std::move(*correlation),
                          grid,
                          initial,
                          std::move(methods),
                          oracle,
                          markov,
                          root.string("output_dir", "out"),
                          tol};
}

namespace {

void apply_overrides(json& doc, const Overrides& overrides)
{
    if (overrides.step) doc["grid"]["h"] = *overrides.step;
    if (overrides.t_end) doc["grid"]["t_end"] = *overrides.t_end;
    if (overrides.output_dir) doc["output_dir"] = overrides.output_dir->string();
}

}  // namespace

ScenarioConfig load_config(std::string_view text, const std::optional<std::string>& base_preset,
                           const Overrides& overrides)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const std::size_t offset = std::min<std::size_t>(e.byte, text.size());
        const std::size_t line =
            static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n')) + 1;
        throw ConfigError(std::string("malformed JSON: ") + e.what(), offset == 0 ? 1 : line);
    }
    if (!doc.is_object()) throw ConfigError("document must be a JSON object", 1);

    std::optional<std::string> base = base_preset;
    if (!base && doc.contains("preset")) {
        if (!doc.at("preset").is_string()) throw ConfigError("preset: must be a string", line_of(text, {"preset"}));
        base = doc.at("preset").get<std::string>();
    }
    if (base) {
        json merged = preset(*base);
        doc.erase("preset");
        merged.merge_patch(doc);
        doc = std::move(merged);
    }
    apply_overrides(doc, overrides);
    return parse_config(doc, text);
}

ScenarioConfig load_preset(std::string_view name, const Overrides& overrides)
{
    json doc = preset(name);
    apply_overrides(doc, overrides);
    return parse_config(doc);
}

double Deviation::max() const noexcept { return std::max({rho11, rho00, re_rho10, im_rho10}); }

Deviation compare(const Trajectory& a, const Trajectory& b)
{
    require_same_grid(a.grid, b.grid, "compare");
    Deviation d;
    const std::size_t n = std::min(a.valid_count(), b.valid_count());
    for (std::size_t i = 0; i < n; ++i) {
        const QubitState& x = a.states[i];
        const QubitState& y = b.states[i];
        const std::array<double, 4> diff{std::abs(x.rho11 - y.rho11), std::abs(x.rho00() - y.rho00()),
                                         std::abs(x.rho10.real() - y.rho10.real()),
                                         std::abs(x.rho10.imag() - y.rho10.imag())};
        if (!std::all_of(diff.begin(), diff.end(), [](double v) { return std::isfinite(v); })) continue;
        d.rho11 = std::max(d.rho11, diff[0]);
        d.rho00 = std::max(d.rho00, diff[1]);
        d.re_rho10 = std::max(d.re_rho10, diff[2]);
        d.im_rho10 = std::max(d.im_rho10, diff[3]);
        ++d.compared_points;
    }
    return d;
}

namespace {

OracleRun run_oracle(const ScenarioConfig& config)
{
    ModeSet modes;
    if (const auto* m = config.correlation.as_modes()) {
        modes = *m;
    } else {
        const auto& p = *config.correlation.as_lorentzian();
        modes = sample_lorentzian_modes(p, config.oracle.omega0 * p.lambda, config.oracle.n_modes,
                                        config.oracle.cutoff_width);
    }
    // Substep so the integrator resolves the largest detuning, then read back on the grid.
    const TimeGrid& grid = config.grid;
    const double phase = grid.step() * modes.max_detuning();
    const auto substeps = static_cast<std::size_t>(std::max(1.0, std::ceil(phase / max_phase_per_step)));
    if (substeps == 1) return evolve_one_excitation(modes, cplx(1.0, 0.0), grid);

    const TimeGrid fine(grid.step() / static_cast<double>(substeps), grid.intervals() * substeps);
    OracleRun run = evolve_one_excitation(modes, cplx(1.0, 0.0), fine);
    ComplexSignal coarse(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) coarse[i] = run.c1[i * substeps];
    run.c1 = std::move(coarse);
    return run;
}

json deviation_json(const Deviation& d)
{
    return json{{"rho11", d.rho11},
                {"rho00", d.rho00},
                {"re_rho10", d.re_rho10},
                {"im_rho10", d.im_rho10},
                {"max", d.max()},
                {"compared_points", d.compared_points}};
}

double min_choi_over(const ComplexSignal& g)
{
    double out = std::numeric_limits<double>::infinity();
    for (const cplx& v : g.values) out = std::min(out, min_choi_eigenvalue(MapPoint{v}));
    return out;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config)
{
    const TimeGrid& grid = config.grid;
    const CorrelationFunction& cf = config.correlation;
    const QubitState& rho0 = config.initial;

    AmplitudeSolution amplitude = guarded(Method::exact, [&] { return solve_amplitude(cf, grid); });
    MemoryKernel exact_kernel = guarded(Method::nz_exact, [&] { return nz_kernel_exact(cf, amplitude); });
    TclCoefficients tcl_exact = tcl_coefficients(amplitude.x, amplitude.xdot, config.tolerances.breakdown_threshold);

    ScenarioResult result{amplitude,   cf.sample(grid), {}, std::move(exact_kernel), std::move(tcl_exact),
                          std::nullopt, std::nullopt,    std::nullopt, json::object()};
    const Trajectory exact = apply_map(amplitude.x, rho0);

    if (config.wants(Method::tcl_order2) || config.wants(Method::tcl_order4)) {
        result.tcl_order2 = tcl_rates_perturbative(cf, grid, 2);
    }
    if (config.wants(Method::tcl_order4)) result.tcl_order4 = tcl_rates_perturbative(cf, grid, 4);
    const MarkovParams markov = config.markov.value_or(markov_limit(cf, grid));

    for (Method m : config.methods) {
        Trajectory t = guarded(m, [&]() -> Trajectory {
            switch (m) {
            case Method::exact: return exact;
            case Method::tcl_exact: return tcl_propagate(result.tcl_exact, rho0);
            case Method::tcl_order2: return tcl_propagate(*result.tcl_order2, rho0);
            case Method::tcl_order4: return tcl_propagate(*result.tcl_order2 + *result.tcl_order4, rho0);
            case Method::nz_exact: return nz_propagate(result.exact_kernel, rho0);
            case Method::nz_analytic: return nz_propagate(nz_kernel_lorentzian(*cf.as_lorentzian(), grid), rho0);
            case Method::nz_order2: return nz_propagate(nz_kernel_perturbative(cf, grid, 2), rho0);
            case Method::nz_order4: return nz_propagate(nz_kernel_perturbative(cf, grid, 4), rho0);
            case Method::markov: return markov_propagate(markov, rho0, grid);
            case Method::ansatz:
                if (markov.gamma <= 0.0) return ansatz_propagate(markov, RealSignal(grid, 0.0), rho0);
                return ansatz_propagate(markov, default_ansatz_kernel(cf, grid, markov), rho0);
            case Method::oracle: {
                try {
                    result.oracle_run = run_oracle(config);
                } catch (const std::domain_error& e) {
                    throw MethodFailure(m, 0, e.what());
                }
                return apply_map(result.oracle_run->c1, rho0);
            }
            }
            throw std::logic_error("unhandled method");
        });
        for (std::size_t i = 0; i < t.valid_count(); ++i) {
            const QubitState& s = t.states[i];
            if (!std::isfinite(s.rho11) || !std::isfinite(s.rho10.real()) || !std::isfinite(s.rho10.imag())) {
                throw MethodFailure(m, i, "non-finite density-matrix entry");
            }
        }
        result.trajectories.emplace(m, std::move(t));
    }

    // Report
    json& report = result.report;
    report["scenario"] = config.name;
    report["correlation"] = config.correlation_spec;
    report["grid"] = {{"h", grid.step()}, {"t_end", grid.end()}, {"points", grid.size()}};
    json methods = json::array();
    for (Method m : config.methods) methods.push_back(std::string(to_string(m)));
    report["methods"] = methods;
    report["markov"] = {{"gamma", markov.gamma}, {"shift", markov.shift}};

    json deviations = json::object();
    for (const auto& [m, t] : result.trajectories) {
        if (m == Method::exact) continue;
        deviations[std::string(to_string(m)) + " vs exact"] = deviation_json(compare(t, exact));
    }
    report["deviations"] = deviations;

    if (result.tcl_exact.breakdown_index) {
        report["breakdown_index"] = *result.tcl_exact.breakdown_index;
        report["breakdown_time"] = *result.tcl_exact.breakdown_time;
    } else {
        report["breakdown_index"] = nullptr;
        report["breakdown_time"] = nullptr;
    }
    report["min_choi_eigenvalue_exact"] = min_choi_over(amplitude.x);

    json min_population = json::object();
    json violations = json::object();
    for (const auto& [m, t] : result.trajectories) {
        double lowest = std::numeric_limits<double>::infinity();
        std::size_t bad = 0;
        const auto flags = t.positivity_flags();
        for (std::size_t i = 0; i < t.valid_count(); ++i) {
            lowest = std::min(lowest, t.states[i].rho11);
            if (!flags[i]) ++bad;
        }
        min_population[std::string(to_string(m))] = null_if_nan(lowest);
        violations[std::string(to_string(m))] = bad;
    }
    report["min_population"] = min_population;
    report["positivity_violations"] = violations;

    const ComplexSignal& f = result.correlation_samples;
    double k_residual = 0.0;
    double eps_residual = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        k_residual = std::max(k_residual,
                              std::abs(result.exact_kernel.k1[i] + result.exact_kernel.k2[i] - 2.0 * f[i].real()));
        eps_residual = std::max(eps_residual, std::abs(result.exact_kernel.epsilon[i] - f[i].imag()));
    }
    report["identity_residuals"] = {{"memory_identity", check_memory_identity(cf, grid).max_residual},
                                    {"k1_plus_k2_minus_2f1", k_residual},
                                    {"epsilon_minus_f2", eps_residual}};
    if (result.oracle_run) {
        report["oracle"] = {{"max_norm_drift", result.oracle_run->max_norm_drift},
                            {"max_excitation_drift", result.oracle_run->max_excitation_drift}};
    }
    json warnings = json::array();
    for (const auto& w : result.exact_kernel.warnings) warnings.push_back(w);
    if (cf.hermitian_defect() > config.tolerances.hermitian) {
        warnings.push_back("correlation has non-zero Im f(0); f(-tau) = conj f(tau) is violated");
    }
    report["warnings"] = warnings;
    return result;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "t,rho11,rho00,re_rho10,im_rho10\n";
    for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
        const QubitState& s = trajectory.states[i];
        out << format_double(trajectory.grid.time(i)) << ',' << format_double(s.rho11) << ','
            << format_double(s.rho00()) << ',' << format_double(s.rho10.real()) << ','
            << format_double(s.rho10.imag()) << '\n';
    }
}

void write_kernel_csv(const std::filesystem::path& path, const MemoryKernel& kernel)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "t,epsilon,k1,k2\n";
    for (std::size_t i = 0; i < kernel.k1.size(); ++i) {
        out << format_double(kernel.k1.grid.time(i)) << ',' << format_double(kernel.epsilon[i]) << ','
            << format_double(kernel.k1[i]) << ',' << format_double(kernel.k2[i]) << '\n';
    }
}

void write_rates_csv(const std::filesystem::path& path, const TclCoefficients& exact,
                     const TclCoefficients* order2, const TclCoefficients* order4)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "t,gamma,S";
    if (order2) out << ",gamma2,S2";
    if (order4) out << ",gamma4,S4";
    out << '\n';
    for (std::size_t i = 0; i < exact.gamma.size(); ++i) {
        out << format_double(exact.gamma.grid.time(i)) << ',' << format_double(exact.gamma[i]) << ','
            << format_double(exact.shift[i]);
        if (order2) out << ',' << format_double(order2->gamma[i]) << ',' << format_double(order2->shift[i]);
        if (order4) out << ',' << format_double(order4->gamma[i]) << ',' << format_double(order4->shift[i]);
        out << '\n';
    }
}

void write_outputs(const ScenarioConfig& config, const ScenarioResult& result, int selection)
{
    const auto& dir = config.output_dir;
    std::filesystem::create_directories(dir);
    if (selection & static_cast<int>(Output::trajectories)) {
        for (const auto& [m, t] : result.trajectories) {
            write_trajectory_csv(dir / (std::string(to_string(m)) + ".csv"), t);
        }
    }
    if (selection & static_cast<int>(Output::kernel)) write_kernel_csv(dir / "kernel.csv", result.exact_kernel);
    if (selection & static_cast<int>(Output::rates)) {
        write_rates_csv(dir / "tcl_rates.csv", result.tcl_exact, result.tcl_order2 ? &*result.tcl_order2 : nullptr,
                        result.tcl_order4 ? &*result.tcl_order4 : nullptr);
    }
    if (selection & static_cast<int>(Output::report)) {
        std::ofstream out(dir / "report.json", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write report.json");
        out << result.report.dump(2) << '\n';
    }
}

bool VerifyOutcome::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

VerifyOutcome verify(const ScenarioConfig& config)
{
    const TimeGrid& grid = config.grid;
    const CorrelationFunction& cf = config.correlation;
    const Tolerances& tol = config.tolerances;
    VerifyOutcome out;
    auto add = [&](std::string name, double value, double tolerance, std::string detail = {}) {
        out.checks.push_back(CheckResult{std::move(name), value <= tolerance, value, tolerance, std::move(detail)});
    };

    // f(-tau) = conj f(tau) at every grid time, including Im f(0) = 0.
    double hermitian = cf.hermitian_defect();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.time(i);
        hermitian = std::max(hermitian, std::abs(cf(-t) - std::conj(cf(t))));
    }
    add("hermitian-symmetry", hermitian, tol.hermitian, "max |f(-t) - conj f(t)| and |Im f(0)|");

    ScenarioResult result = run_scenario(config);
    const ComplexSignal& f = result.correlation_samples;

    double k_residual = 0.0;
    double eps_residual = 0.0;
    auto accumulate = [&](const MemoryKernel& k) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            k_residual = std::max(k_residual, std::abs(k.k1[i] + k.k2[i] - 2.0 * f[i].real()));
            eps_residual = std::max(eps_residual, std::abs(k.epsilon[i] - f[i].imag()));
        }
    };
    accumulate(result.exact_kernel);
    if (const auto* p = cf.as_lorentzian()) accumulate(nz_kernel_lorentzian(*p, grid));
    add("kernel-constraint-k1-k2", k_residual, tol.constraint, "max |k1 + k2 - 2 f1|");
    add("kernel-constraint-epsilon", eps_residual, tol.constraint, "max |epsilon - f2|");

    double f_scale = 1.0;
    for (const cplx& v : f.values) f_scale = std::max(f_scale, std::norm(v));
    add("memory-identity", check_memory_identity(cf, grid).max_residual / f_scale, tol.identity,
        "nested-integral identity residual for f1 and f2, over max(1, sup |f|^2)");

    add("choi-psd-exact", std::max(0.0, -min_choi_over(result.amplitude.x)), tol.choi,
        "negative part of the min Choi eigenvalue of the exact map");

    double contractivity = 0.0;
    for (const cplx& g : result.amplitude.x.values) contractivity = std::max(contractivity, std::abs(g) - 1.0);
    add("contractivity", contractivity, tol.contractivity, "max |G(t)| - 1");

    double trace = 0.0;
    for (const auto& [m, t] : result.trajectories) {
        for (std::size_t i = 0; i < t.valid_count(); ++i) {
            trace = std::max(trace, std::abs(t.states[i].rho11 + t.states[i].rho00() - 1.0));
        }
    }
    add("trace-preservation", trace, tol.trace, "max |rho11 + rho00 - 1| over all methods");
    return out;
}

}  // namespace qdecay::scenario
