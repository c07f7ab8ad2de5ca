// circreg: nonparametric regression and hypothesis tests for circular data.
//
// Subcommands: fit (estimate a regression curve), test (no-effect, equality,
// parallelism), trace (rerun a test over a smoothing-parameter sequence),
// simulate (Monte Carlo rejection studies from a JSON config).
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "circreg/ancova.hpp"
#include "circreg/angles.hpp"
#include "circreg/dataset_io.hpp"
#include "circreg/errors.hpp"
#include "circreg/estimators.hpp"
#include "circreg/noeffect.hpp"
#include "circreg/report.hpp"
#include "circreg/sample.hpp"
#include "circreg/simulation.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using ordered_json = nlohmann::ordered_json;
using namespace circreg;

// Flag combinations that cannot be expressed; mapped to exit code 2.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

Scenario parse_scenario(const std::string& name) {
    if (name == "circ_lin") {
        return Scenario::CircLin;
    }
    if (name == "lin_circ") {
        return Scenario::LinCirc;
    }
    if (name == "circ_circ") {
        return Scenario::CircCirc;
    }
    throw UsageError("unknown scenario: " + name);
}

TestKind parse_test_kind(const std::string& name) {
    if (name == "noeffect") {
        return TestKind::NoEffect;
    }
    if (name == "equality") {
        return TestKind::Equality;
    }
    if (name == "parallelism") {
        return TestKind::Parallelism;
    }
    throw UsageError("unknown test: " + name);
}

Calibration parse_calibration(const std::string& name) {
    if (name == "chi2") {
        return Calibration::Chi2;
    }
    if (name == "bootstrap") {
        return Calibration::Bootstrap;
    }
    throw UsageError("unknown calibration: " + name);
}

std::string kernel_kind_name(const KernelSpec& spec) {
    return spec.kind == KernelKind::VonMises ? "von_mises" : "gaussian";
}

// Degrees-to-radians conversion on ingest; all computation and output stay
// in radians.
void convert_degrees(DatasetFile& file, Scenario scenario) {
    constexpr double factor = kPi / 180.0;
    if (scenario_predictor_kind(scenario) == VariableKind::Circular) {
        for (double& v : file.predictors) {
            v *= factor;
        }
    }
    if (scenario_response_kind(scenario) == VariableKind::Circular) {
        for (double& v : file.responses) {
            v *= factor;
        }
    }
}

struct CommonInput {
    std::string input_path;
    std::string scenario_name;
    bool degrees = false;
};

struct SmoothingChoice {
    double param = 0.0;
    bool cv_requested = false;
    std::size_t grid_points = 30;
    bool param_given = false;
};

struct ChosenSmoothing {
    double param = 0.0;
    bool from_cv = false;
    std::optional<double> cv_criterion;
};

ChosenSmoothing choose_smoothing(const SmoothingChoice& choice,
                                 const RegressionSample& cv_sample) {
    if (choice.cv_requested == choice.param_given) {
        throw UsageError("exactly one of --param and --cv is required");
    }
    if (choice.param_given) {
        if (!(std::isfinite(choice.param) && choice.param > 0.0)) {
            throw UsageError("--param must be positive");
        }
        return ChosenSmoothing{choice.param, false, std::nullopt};
    }
    const CvResult cv = cv_select(cv_sample, default_cv_grid(cv_sample, choice.grid_points));
    return ChosenSmoothing{cv.param, true, cv.criterion};
}

KernelSpec kernel_for(Scenario scenario, double param) {
    return scenario_predictor_kind(scenario) == VariableKind::Circular
               ? KernelSpec::von_mises(param)
               : KernelSpec::gaussian(param);
}

ordered_json report_to_json(const TestReport& report, double alpha) {
    ordered_json j;
    j["statistic"] = report.statistic;
    j["p_value"] = report.p_value;
    j["calibration"] = to_string(report.calibration);
    j["smoothing"] = {{"kind", kernel_kind_name(report.smoothing)},
                      {"value", report.smoothing.param}};
    j["boot_reps"] = report.boot_reps ? ordered_json(*report.boot_reps) : ordered_json(nullptr);
    j["seed"] = report.seed ? ordered_json(*report.seed) : ordered_json(nullptr);
    j["alpha"] = alpha;
    j["reject"] = report.p_value <= alpha;
    return j;
}

void write_or_print(const std::optional<std::string>& out_path, const std::string& content) {
    if (out_path) {
        atomic_write_text(*out_path, content);
    } else {
        std::cout << content;
    }
}

// ---------------------------------------------------------------------------
// fit

struct FitOptions {
    CommonInput common;
    SmoothingChoice smoothing;
    std::size_t eval_points = 200;
    std::string out_path;
};

void run_fit(const FitOptions& opt) {
    const Scenario scenario = parse_scenario(opt.common.scenario_name);
    DatasetFile file = read_dataset_csv(opt.common.input_path);
    if (opt.common.degrees) {
        convert_degrees(file, scenario);
    }
    const RegressionSample sample = build_regression_sample(
        file, scenario_predictor_kind(scenario), scenario_response_kind(scenario));

    const ChosenSmoothing sm = choose_smoothing(opt.smoothing, sample);

    if (opt.eval_points < 2) {
        throw UsageError("--eval-points must be at least 2");
    }
    std::vector<double> eval(opt.eval_points);
    if (sample.predictor_kind() == VariableKind::Circular) {
        for (std::size_t i = 0; i < eval.size(); ++i) {
            eval[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(eval.size());
        }
    } else {
        const auto [lo, hi] =
            std::minmax_element(sample.predictors().begin(), sample.predictors().end());
        for (std::size_t i = 0; i < eval.size(); ++i) {
            eval[i] = *lo + (*hi - *lo) * static_cast<double>(i) /
                                static_cast<double>(eval.size() - 1);
        }
    }

    const KernelSpec kernel = kernel_for(scenario, sm.param);
    const std::vector<double> fitted =
        (scenario == Scenario::CircLin)
            ? fit_circ_lin(sample, sm.param, eval)
            : fit_circ_response(sample, kernel, eval);

    std::string csv = "point,fitted\n";
    for (std::size_t i = 0; i < eval.size(); ++i) {
        csv += format_double(eval[i]);
        csv += ',';
        csv += format_double(fitted[i]);
        csv += '\n';
    }
    atomic_write_text(opt.out_path, csv);

    ordered_json sidecar;
    sidecar["scenario"] = to_string(scenario);
    sidecar["smoothing"] = {{"kind", kernel_kind_name(kernel)}, {"value", sm.param}};
    sidecar["cv"] = {{"selected", sm.from_cv},
                     {"criterion", sm.cv_criterion ? ordered_json(*sm.cv_criterion)
                                                   : ordered_json(nullptr)}};
    sidecar["eval_points"] = opt.eval_points;
    atomic_write_text(opt.out_path + ".json", sidecar.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// test

struct TestOptions {
    CommonInput common;
    SmoothingChoice smoothing;
    std::string test_name;
    std::string calibration_name;
    std::uint32_t boot_reps = 500;
    double alpha = 0.05;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_path;
};

struct LoadedTestData {
    Scenario scenario = Scenario::CircLin;
    TestKind kind = TestKind::NoEffect;
    Calibration calibration = Calibration::Bootstrap;
    std::optional<RegressionSample> single;
    std::optional<GroupedSample> grouped;
    std::optional<RegressionSample> grouped_pooled;

    const RegressionSample& cv_sample() const {
        return single ? *single : *grouped_pooled;
    }
};

LoadedTestData load_test_data(const CommonInput& common, const std::string& test_name,
                              const std::string& calibration_name) {
    LoadedTestData data;
    data.scenario = parse_scenario(common.scenario_name);
    data.kind = parse_test_kind(test_name);
    data.calibration = parse_calibration(calibration_name);

    if (data.calibration == Calibration::Chi2 && data.scenario != Scenario::CircLin) {
        throw UsageError("chi-squared calibration unavailable: it requires a circular predictor with a linear response");
    }

    DatasetFile file = read_dataset_csv(common.input_path);
    if (common.degrees) {
        convert_degrees(file, data.scenario);
    }
    const VariableKind pk = scenario_predictor_kind(data.scenario);
    const VariableKind rk = scenario_response_kind(data.scenario);
    if (data.kind == TestKind::NoEffect) {
        data.single = build_regression_sample(file, pk, rk);
    } else {
        if (!file.has_groups()) {
            throw UsageError("--test " + test_name + " requires a group column in the input");
        }
        data.grouped = build_grouped_sample(file, pk, rk);
        data.grouped_pooled = data.grouped->pooled();
    }
    return data;
}

TestReport dispatch_test(const LoadedTestData& data, double param, std::uint32_t boot_reps,
                         std::optional<std::uint64_t> seed) {
    const std::uint64_t seed_value = seed.value_or(0);
    if (data.kind == TestKind::NoEffect) {
        if (data.scenario == Scenario::CircLin) {
            return noeffect_test_circ_lin(*data.single, param, data.calibration, boot_reps,
                                          seed_value);
        }
        return noeffect_test_circ_response(*data.single, kernel_for(data.scenario, param),
                                           boot_reps, seed_value);
    }
    if (data.scenario == Scenario::CircLin) {
        return ancova_test_circ_lin(*data.grouped, param, data.kind, data.calibration,
                                    boot_reps, seed_value);
    }
    return ancova_test_circ_response(*data.grouped, kernel_for(data.scenario, param),
                                     data.kind, boot_reps, seed_value);
}

void run_test(const TestOptions& opt) {
    if (!(std::isfinite(opt.alpha) && opt.alpha > 0.0 && opt.alpha < 1.0)) {
        throw UsageError("--alpha must lie strictly between 0 and 1");
    }
    const LoadedTestData data =
        load_test_data(opt.common, opt.test_name, opt.calibration_name);
    if (data.calibration == Calibration::Bootstrap && !opt.seed) {
        throw UsageError("--seed is required for bootstrap calibration");
    }
    const ChosenSmoothing sm = choose_smoothing(opt.smoothing, data.cv_sample());
    const TestReport report = dispatch_test(data, sm.param, opt.boot_reps, opt.seed);
    write_or_print(opt.out_path, report_to_json(report, opt.alpha).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// trace

struct TraceOptions {
    CommonInput common;
    std::string test_name;
    std::string calibration_name;
    std::uint32_t boot_reps = 500;
    double alpha = 0.05;
    std::optional<std::uint64_t> seed;
    std::optional<double> param_min;
    std::optional<double> param_max;
    std::size_t param_count = 30;
    std::string out_csv;
    std::optional<std::string> out_svg;
};

struct TracePoint {
    double param = 0.0;
    std::optional<double> statistic;
    std::optional<double> p_value;
};

std::string render_trace_svg(const std::vector<TracePoint>& points, double alpha,
                             std::optional<double> cv_param) {
    const double width = 720.0;
    const double height = 440.0;
    const double left = 70.0;
    const double right = width - 20.0;
    const double top = 20.0;
    const double bottom = height - 50.0;
    const double pmin = points.front().param;
    const double pmax = points.back().param;
    const auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return std::string(buf);
    };
    const auto x_of = [&](double p) {
        return left + (right - left) * (p - pmin) / (pmax - pmin);
    };
    const auto y_of = [&](double pv) { return bottom - (bottom - top) * pv; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
           fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // Axes.
    svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(bottom) + "\" x2=\"" + fmt(right) +
           "\" y2=\"" + fmt(bottom) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(left) +
           "\" y2=\"" + fmt(bottom) + "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double pv = 0.25 * i;
        const double y = y_of(pv);
        svg += "<line x1=\"" + fmt(left - 4) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(left) +
               "\" y2=\"" + fmt(y) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(left - 8) + "\" y=\"" + fmt(y + 4) +
               "\" text-anchor=\"end\" font-size=\"12\">" + fmt(pv) + "</text>\n";
        const double p = pmin + (pmax - pmin) * 0.25 * i;
        const double x = x_of(p);
        svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(bottom) + "\" x2=\"" + fmt(x) +
               "\" y2=\"" + fmt(bottom + 4) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(bottom + 18) +
               "\" text-anchor=\"middle\" font-size=\"12\">" + fmt(p) + "</text>\n";
    }
    svg += "<text x=\"" + fmt((left + right) / 2) + "\" y=\"" + fmt(height - 12) +
           "\" text-anchor=\"middle\" font-size=\"13\">smoothing parameter</text>\n";
    svg += "<text x=\"16\" y=\"" + fmt((top + bottom) / 2) +
           "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " +
           fmt((top + bottom) / 2) + ")\">p-value</text>\n";
    // Alpha rule.
    svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(y_of(alpha)) + "\" x2=\"" + fmt(right) +
           "\" y2=\"" + fmt(y_of(alpha)) +
           "\" stroke=\"#c0392b\" stroke-dasharray=\"6 4\"/>\n";
    svg += "<text x=\"" + fmt(right) + "\" y=\"" + fmt(y_of(alpha) - 5) +
           "\" text-anchor=\"end\" font-size=\"12\" fill=\"#c0392b\">alpha = " + fmt(alpha) +
           "</text>\n";
    // Cross-validation rule.
    if (cv_param && *cv_param >= pmin && *cv_param <= pmax) {
        const double x = x_of(*cv_param);
        svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(x) +
               "\" y2=\"" + fmt(bottom) +
               "\" stroke=\"#27ae60\" stroke-dasharray=\"6 4\"/>\n";
        svg += "<text x=\"" + fmt(x + 4) + "\" y=\"" + fmt(top + 12) +
               "\" font-size=\"12\" fill=\"#27ae60\">cv = " + fmt(*cv_param) + "</text>\n";
    }
    // Trace polyline, broken at failed points.
    std::string run;
    int run_points = 0;
    const auto flush_run = [&]() {
        if (run_points >= 2) {
            svg += "<polyline fill=\"none\" stroke=\"#2c3e50\" stroke-width=\"1.5\" points=\"" +
                   run + "\"/>\n";
        }
        run.clear();
        run_points = 0;
    };
    for (const TracePoint& pt : points) {
        if (!pt.p_value) {
            flush_run();
            continue;
        }
        if (!run.empty()) {
            run += ' ';
        }
        run += fmt(x_of(pt.param)) + "," + fmt(y_of(*pt.p_value));
        ++run_points;
    }
    flush_run();
    for (const TracePoint& pt : points) {
        if (pt.p_value) {
            svg += "<circle cx=\"" + fmt(x_of(pt.param)) + "\" cy=\"" + fmt(y_of(*pt.p_value)) +
                   "\" r=\"2.5\" fill=\"#2c3e50\"/>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

void run_trace(const TraceOptions& opt) {
    if (!(std::isfinite(opt.alpha) && opt.alpha > 0.0 && opt.alpha < 1.0)) {
        throw UsageError("--alpha must lie strictly between 0 and 1");
    }
    if (opt.param_count < 2) {
        throw UsageError("--param-count must be at least 2");
    }
    const LoadedTestData data =
        load_test_data(opt.common, opt.test_name, opt.calibration_name);
    if (data.calibration == Calibration::Bootstrap && !opt.seed) {
        throw UsageError("--seed is required for bootstrap calibration");
    }

    const bool circular_predictor =
        scenario_predictor_kind(data.scenario) == VariableKind::Circular;
    const double pmin = opt.param_min.value_or(0.1);
    const double pmax = opt.param_max.value_or(circular_predictor ? 70.0 : 50.0);
    if (!(std::isfinite(pmin) && std::isfinite(pmax) && pmin > 0.0 && pmax > pmin)) {
        throw UsageError("--param-min/--param-max must satisfy 0 < min < max");
    }

    std::vector<TracePoint> points(opt.param_count);
    for (std::size_t i = 0; i < opt.param_count; ++i) {
        points[i].param = pmin + (pmax - pmin) * static_cast<double>(i) /
                                     static_cast<double>(opt.param_count - 1);
        try {
            const TestReport report =
                dispatch_test(data, points[i].param, opt.boot_reps, opt.seed);
            points[i].statistic = report.statistic;
            points[i].p_value = report.p_value;
        } catch (const Error&) {
            // Recorded as a missing value; the trace continues.
        }
    }

    std::string csv = "param,statistic,p_value\n";
    for (const TracePoint& pt : points) {
        csv += format_double(pt.param);
        csv += ',';
        if (pt.statistic) {
            csv += format_double(*pt.statistic);
        }
        csv += ',';
        if (pt.p_value) {
            csv += format_double(*pt.p_value);
        }
        csv += '\n';
    }
    atomic_write_text(opt.out_csv, csv);

    if (opt.out_svg) {
        std::optional<double> cv_param;
        try {
            cv_param = cv_select(data.cv_sample(), default_cv_grid(data.cv_sample())).param;
        } catch (const Error&) {
            // The rule is omitted when cross-validation fails.
        }
        atomic_write_text(*opt.out_svg, render_trace_svg(points, opt.alpha, cv_param));
    }
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
    std::string config_path;
    std::string out_path;
};

void require_keys(const ordered_json& j, const std::set<std::string>& allowed,
                  const std::string& where) {
    for (const auto& item : j.items()) {
        if (allowed.find(item.key()) == allowed.end()) {
            throw ParseError(where + ": unknown key '" + item.key() + "'");
        }
    }
}

template <typename T>
T get_field(const ordered_json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) {
        throw ParseError(where + ": missing key '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError(where + ": key '" + key + "' has the wrong type");
    }
}

template <typename T>
T get_field_or(const ordered_json& j, const std::string& key, const std::string& where,
               T fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    return get_field<T>(j, key, where);
}

// Unsigned fields read defensively: a negative JSON integer must be an
// error, not a silent wraparound.
std::uint64_t get_unsigned(const ordered_json& j, const std::string& key,
                           const std::string& where) {
    if (!j.contains(key)) {
        throw ParseError(where + ": missing key '" + key + "'");
    }
    const auto& field = j.at(key);
    if (!field.is_number_integer() && !field.is_number_unsigned()) {
        throw ParseError(where + ": key '" + key + "' must be a nonnegative integer");
    }
    if (field.is_number_integer() && !field.is_number_unsigned() &&
        field.get<std::int64_t>() < 0) {
        throw ParseError(where + ": key '" + key + "' must be a nonnegative integer");
    }
    return field.get<std::uint64_t>();
}

std::uint64_t get_unsigned_or(const ordered_json& j, const std::string& key,
                              const std::string& where, std::uint64_t fallback) {
    return j.contains(key) ? get_unsigned(j, key, where) : fallback;
}

ErrorSpec parse_error_spec(const ordered_json& j, const std::string& where) {
    if (!j.is_object()) {
        throw ParseError(where + ": 'error' must be an object");
    }
    require_keys(j, {"law", "param"}, where + ".error");
    const std::string law = get_field<std::string>(j, "law", where + ".error");
    const double param = get_field<double>(j, "param", where + ".error");
    if (law == "normal") {
        return ErrorSpec::normal(param);
    }
    if (law == "rescaled_exponential") {
        return ErrorSpec::rescaled_exponential(param);
    }
    if (law == "von_mises") {
        return ErrorSpec::von_mises(param);
    }
    throw ParseError(where + ".error: unknown law '" + law + "'");
}

ScenarioSpec parse_study(const ordered_json& j, std::size_t index) {
    const std::string where = "study " + std::to_string(index + 1);
    if (!j.is_object()) {
        throw ParseError(where + ": must be an object");
    }
    require_keys(j,
                 {"scenario", "test", "beta", "n", "sizes", "error", "cv_scale", "calibration",
                  "alpha", "mc_reps", "boot_reps", "seed"},
                 where);
    ScenarioSpec spec;
    try {
        spec.scenario = parse_scenario(get_field<std::string>(j, "scenario", where));
        spec.test = parse_test_kind(get_field<std::string>(j, "test", where));
        spec.calibration =
            parse_calibration(get_field_or<std::string>(j, "calibration", where, "bootstrap"));
    } catch (const UsageError& e) {
        throw ParseError(where + ": " + e.what());
    }
    spec.beta = get_field<double>(j, "beta", where);
    if (j.contains("n") == j.contains("sizes")) {
        throw ParseError(where + ": exactly one of 'n' and 'sizes' is required");
    }
    if (j.contains("n")) {
        spec.sizes = {static_cast<std::size_t>(get_unsigned(j, "n", where))};
    } else {
        const auto& sizes = j.at("sizes");
        if (!sizes.is_array()) {
            throw ParseError(where + ": 'sizes' must be an array");
        }
        for (std::size_t k = 0; k < sizes.size(); ++k) {
            ordered_json wrapper;
            wrapper["sizes"] = sizes.at(k);
            spec.sizes.push_back(static_cast<std::size_t>(get_unsigned(wrapper, "sizes", where)));
        }
    }
    if (!j.contains("error")) {
        throw ParseError(where + ": missing key 'error'");
    }
    spec.error = parse_error_spec(j.at("error"), where);
    spec.cv_scale = get_field_or<double>(j, "cv_scale", where, 1.0);
    spec.alpha = get_field_or<double>(j, "alpha", where, 0.05);
    spec.mc_reps = static_cast<std::uint32_t>(get_unsigned(j, "mc_reps", where));
    spec.boot_reps = static_cast<std::uint32_t>(get_unsigned_or(j, "boot_reps", where, 500));
    spec.seed = get_unsigned(j, "seed", where);
    try {
        spec.validate();
    } catch (const InvalidInputError& e) {
        throw ParseError(where + ": " + e.what());
    }
    return spec;
}

ordered_json spec_to_json(const ScenarioSpec& spec) {
    ordered_json j;
    j["scenario"] = to_string(spec.scenario);
    j["test"] = to_string(spec.test);
    j["beta"] = spec.beta;
    j["sizes"] = spec.sizes;
    j["error"] = {{"law", to_string(spec.error.law)}, {"param", spec.error.param}};
    j["cv_scale"] = spec.cv_scale;
    j["calibration"] = to_string(spec.calibration);
    j["alpha"] = spec.alpha;
    j["mc_reps"] = spec.mc_reps;
    j["boot_reps"] = spec.boot_reps;
    j["seed"] = spec.seed;
    return j;
}

void run_simulate(const SimulateOptions& opt) {
    std::ifstream in(opt.config_path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open config: " + opt.config_path);
    }
    ordered_json config;
    try {
        config = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("config: " + std::string(e.what()));
    }
    if (!config.is_object()) {
        throw ParseError("config: top level must be an object");
    }
    require_keys(config, {"studies"}, "config");
    if (!config.contains("studies") || !config.at("studies").is_array()) {
        throw ParseError("config: 'studies' must be an array");
    }

    // All studies are validated before any computation starts.
    std::vector<ScenarioSpec> specs;
    for (std::size_t i = 0; i < config.at("studies").size(); ++i) {
        specs.push_back(parse_study(config.at("studies").at(i), i));
    }

    std::string csv =
        "scenario,test,beta,n1,n2,error_law,error_param,cv_scale,calibration,alpha,"
        "mc_reps,boot_reps,seed,rejection_rate,mc_se,replicates_used,failures\n";
    for (const ScenarioSpec& spec : specs) {
        const StudyRow row = rejection_study(spec);
        csv += to_string(spec.scenario) + ',' + to_string(spec.test) + ',' +
               format_double(spec.beta) + ',';
        csv += std::to_string(spec.sizes[0]) + ',';
        if (spec.sizes.size() > 1) {
            csv += std::to_string(spec.sizes[1]);
        }
        csv += ',' + to_string(spec.error.law) + ',' + format_double(spec.error.param) + ',' +
               format_double(spec.cv_scale) + ',' + to_string(spec.calibration) + ',' +
               format_double(spec.alpha) + ',' + std::to_string(spec.mc_reps) + ',' +
               std::to_string(spec.boot_reps) + ',' + std::to_string(spec.seed) + ',' +
               format_double(row.rejection_rate) + ',' + format_double(row.mc_se) + ',' +
               std::to_string(row.replicates_used) + ',' + std::to_string(row.failures) + '\n';
    }
    atomic_write_text(opt.out_path, csv);

    ordered_json manifest;
    manifest["version"] = kVersion;
    manifest["studies"] = ordered_json::array();
    for (const ScenarioSpec& spec : specs) {
        manifest["studies"].push_back(spec_to_json(spec));
    }
    atomic_write_text(opt.out_path + ".manifest.json", manifest.dump(2) + "\n");
}

void add_common_options(CLI::App* cmd, CommonInput& common) {
    cmd->add_option("input", common.input_path, "Input CSV (predictor,response[,group])")
        ->required();
    cmd->add_option("--scenario", common.scenario_name,
                    "Variable kinds: circ_lin, lin_circ, or circ_circ")
        ->required()
        ->check(CLI::IsMember({"circ_lin", "lin_circ", "circ_circ"}));
    cmd->add_flag("--degrees", common.degrees,
                  "Interpret circular columns as degrees (converted on ingest; output stays in radians)");
}

void add_smoothing_options(CLI::App* cmd, SmoothingChoice& smoothing) {
    auto* param = cmd->add_option("--param", smoothing.param,
                                  "Smoothing parameter (concentration or bandwidth)");
    auto* cv = cmd->add_flag("--cv", smoothing.cv_requested,
                             "Select the smoothing parameter by cross-validation");
    param->excludes(cv);
    cv->excludes(param);
    cmd->add_option("--grid-points", smoothing.grid_points,
                    "Cross-validation grid size (default 30)");
    cmd->parse_complete_callback([param, &smoothing]() {
        smoothing.param_given = param->count() > 0;
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonparametric regression and hypothesis tests for circular data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    FitOptions fit_opt;
    auto* fit = app.add_subcommand("fit", "Estimate a regression curve");
    add_common_options(fit, fit_opt.common);
    add_smoothing_options(fit, fit_opt.smoothing);
    fit->add_option("--eval-points", fit_opt.eval_points, "Evaluation grid size (default 200)");
    fit->add_option("--out", fit_opt.out_path, "Output CSV path (JSON sidecar at <out>.json)")
        ->required();

    TestOptions test_opt;
    auto* test = app.add_subcommand("test", "Run a hypothesis test");
    add_common_options(test, test_opt.common);
    add_smoothing_options(test, test_opt.smoothing);
    test->add_option("--test", test_opt.test_name, "noeffect, equality, or parallelism")
        ->required()
        ->check(CLI::IsMember({"noeffect", "equality", "parallelism"}));
    test->add_option("--calibration", test_opt.calibration_name, "chi2 or bootstrap")
        ->required()
        ->check(CLI::IsMember({"chi2", "bootstrap"}));
    test->add_option("--boot-reps", test_opt.boot_reps, "Bootstrap replicates (default 500)");
    test->add_option("--alpha", test_opt.alpha, "Significance level (default 0.05)");
    test->add_option("--seed", test_opt.seed, "RNG seed (required for bootstrap)");
    test->add_option("--out", test_opt.out_path, "Output JSON path (stdout when omitted)");

    TraceOptions trace_opt;
    auto* trace = app.add_subcommand("trace", "Run a test over a smoothing-parameter sequence");
    add_common_options(trace, trace_opt.common);
    trace->add_option("--test", trace_opt.test_name, "noeffect, equality, or parallelism")
        ->required()
        ->check(CLI::IsMember({"noeffect", "equality", "parallelism"}));
    trace->add_option("--calibration", trace_opt.calibration_name, "chi2 or bootstrap")
        ->required()
        ->check(CLI::IsMember({"chi2", "bootstrap"}));
    trace->add_option("--boot-reps", trace_opt.boot_reps, "Bootstrap replicates (default 500)");
    trace->add_option("--alpha", trace_opt.alpha, "Significance level (default 0.05)");
    trace->add_option("--seed", trace_opt.seed, "RNG seed (required for bootstrap)");
    trace->add_option("--param-min", trace_opt.param_min, "Smallest smoothing parameter (default 0.1)");
    trace->add_option("--param-max", trace_opt.param_max,
                      "Largest smoothing parameter (default 70 circular / 50 linear)");
    trace->add_option("--param-count", trace_opt.param_count, "Trace length (default 30)");
    trace->add_option("--out-csv", trace_opt.out_csv, "Output CSV path")->required();
    trace->add_option("--out-svg", trace_opt.out_svg, "Optional SVG plot path");

    SimulateOptions sim_opt;
    auto* simulate = app.add_subcommand("simulate", "Run rejection studies from a JSON config");
    simulate->add_option("config", sim_opt.config_path, "Study configuration JSON")->required();
    simulate->add_option("--out", sim_opt.out_path, "Output CSV path (manifest at <out>.manifest.json)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (fit->parsed()) {
            run_fit(fit_opt);
        } else if (test->parsed()) {
            run_test(test_opt);
        } else if (trace->parsed()) {
            run_trace(trace_opt);
        } else if (simulate->parsed()) {
            run_simulate(sim_opt);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const InvalidInputError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const TooFewObservationsError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const DuplicatePredictorsError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const ZeroDistanceError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
