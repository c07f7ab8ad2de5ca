#include "circreg/simulation.hpp"

#include <chrono>
#include <cmath>
#include <utility>

#include "circreg/ancova.hpp"
#include "circreg/angles.hpp"
#include "circreg/errors.hpp"
#include "circreg/estimators.hpp"
#include "circreg/noeffect.hpp"

namespace circreg {

namespace {

double noeffect_curve(Scenario scenario, double beta, double t) {
    switch (scenario) {
        case Scenario::CircLin:
            return beta * std::sin(t) * std::cos(t);
        case Scenario::LinCirc:
            return 3.0 * kPi / 8.0 + beta * std::cos(3.0 * t);
        case Scenario::CircCirc:
            return 3.0 * kPi / 4.0 + beta * std::sin(2.0 * t + 2.0 * std::sin(t + kPi / 2.0));
    }
    throw InvalidInputError("unknown scenario");
}

double grouped_curve(Scenario scenario, double amplitude, double t) {
    switch (scenario) {
        case Scenario::CircLin:
            return amplitude * std::cos(t) * std::sin(t);
        case Scenario::LinCirc:
            return amplitude * std::sin(4.0 * t - 1.0);
        case Scenario::CircCirc:
            return amplitude * std::sin(2.0 * t);
    }
    throw InvalidInputError("unknown scenario");
}

double first_group_amplitude(Scenario scenario) {
    return scenario == Scenario::CircLin ? 1.0 : 2.0;
}

double parallel_shift(Scenario scenario) {
    return scenario == Scenario::CircLin ? 0.2 : kPi / 8.0;
}

double draw_error(const ErrorSpec& error, RngStream& rng) {
    switch (error.law) {
        case ErrorLaw::Normal:
            return error.param * rng.normal();
        case ErrorLaw::RescaledExponential:
            return rng.exponential(error.param) - 1.0 / error.param;
        case ErrorLaw::VonMises:
            return rng.von_mises(0.0, error.param);
    }
    throw InvalidInputError("unknown error law");
}

double draw_predictor(VariableKind kind, RngStream& rng) {
    return kind == VariableKind::Circular ? rng.uniform(0.0, kTwoPi) : rng.uniform();
}

RegressionSample draw_group(const ScenarioSpec& spec, std::size_t n, double amplitude,
                            double shift, RngStream& rng) {
    const VariableKind pk = scenario_predictor_kind(spec.scenario);
    const VariableKind rk = scenario_response_kind(spec.scenario);
    std::vector<double> predictors(n);
    std::vector<double> responses(n);
    for (std::size_t i = 0; i < n; ++i) {
        predictors[i] = draw_predictor(pk, rng);
        const double curve = (spec.test == TestKind::NoEffect)
                                 ? noeffect_curve(spec.scenario, amplitude, predictors[i])
                                 : grouped_curve(spec.scenario, amplitude, predictors[i]);
        const double value = curve + shift + draw_error(spec.error, rng);
        responses[i] = (rk == VariableKind::Circular) ? wrap_angle(value) : value;
    }
    return RegressionSample::make(std::move(predictors), std::move(responses), pk, rk);
}

}  // namespace

ErrorSpec ErrorSpec::normal(double sd) {
    if (!(std::isfinite(sd) && sd > 0.0)) {
        throw InvalidInputError("normal error: standard deviation must be positive");
    }
    return ErrorSpec{ErrorLaw::Normal, sd};
}

ErrorSpec ErrorSpec::rescaled_exponential(double rate) {
    if (!(std::isfinite(rate) && rate > 0.0)) {
        throw InvalidInputError("rescaled exponential error: rate must be positive");
    }
    return ErrorSpec{ErrorLaw::RescaledExponential, rate};
}

ErrorSpec ErrorSpec::von_mises(double concentration) {
    if (!(std::isfinite(concentration) && concentration >= 0.0)) {
        throw InvalidInputError("von Mises error: concentration must be nonnegative");
    }
    return ErrorSpec{ErrorLaw::VonMises, concentration};
}

VariableKind scenario_predictor_kind(Scenario scenario) {
    return scenario == Scenario::LinCirc ? VariableKind::Linear : VariableKind::Circular;
}

VariableKind scenario_response_kind(Scenario scenario) {
    return scenario == Scenario::CircLin ? VariableKind::Linear : VariableKind::Circular;
}

std::string to_string(Scenario scenario) {
    switch (scenario) {
        case Scenario::CircLin:
            return "circ_lin";
        case Scenario::LinCirc:
            return "lin_circ";
        case Scenario::CircCirc:
            return "circ_circ";
    }
    return "unknown";
}

std::string to_string(ErrorLaw law) {
    switch (law) {
        case ErrorLaw::Normal:
            return "normal";
        case ErrorLaw::RescaledExponential:
            return "rescaled_exponential";
        case ErrorLaw::VonMises:
            return "von_mises";
    }
    return "unknown";
}

std::string to_string(TestKind kind) {
    switch (kind) {
        case TestKind::NoEffect:
            return "noeffect";
        case TestKind::Equality:
            return "equality";
        case TestKind::Parallelism:
            return "parallelism";
    }
    return "unknown";
}

std::string to_string(Calibration calibration) {
    return calibration == Calibration::Chi2 ? "chi2" : "bootstrap";
}

void ScenarioSpec::validate() const {
    if (mc_reps < 1) {
        throw InvalidInputError("scenario: mc_reps must be at least 1");
    }
    if (!(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0)) {
        throw InvalidInputError("scenario: alpha must lie strictly between 0 and 1");
    }
    if (!std::isfinite(beta)) {
        throw InvalidInputError("scenario: beta must be finite");
    }
    if (!(std::isfinite(cv_scale) && cv_scale > 0.0)) {
        throw InvalidInputError("scenario: cv_scale must be positive");
    }
    const std::size_t expected_sizes = (test == TestKind::NoEffect) ? 1 : 2;
    if (sizes.size() != expected_sizes) {
        throw InvalidInputError(test == TestKind::NoEffect
                                    ? "scenario: no-effect studies take a single sample size"
                                    : "scenario: comparison studies take two group sizes");
    }
    std::size_t total = 0;
    for (std::size_t n : sizes) {
        if (n < 3) {
            throw InvalidInputError("scenario: each sample size must be at least 3");
        }
        total += n;
    }
    if (test == TestKind::Parallelism && total < 9) {
        throw InvalidInputError("scenario: parallelism studies need at least 9 observations in total");
    }
    const bool circular_response = scenario_response_kind(scenario) == VariableKind::Circular;
    if (circular_response && error.law != ErrorLaw::VonMises) {
        throw InvalidInputError("scenario: circular responses require von Mises errors");
    }
    if (!circular_response && error.law == ErrorLaw::VonMises) {
        throw InvalidInputError("scenario: von Mises errors require a circular response");
    }
    if (circular_response && calibration == Calibration::Chi2) {
        throw InvalidInputError("scenario: chi-squared calibration is only available for linear responses");
    }
    if (calibration == Calibration::Bootstrap && boot_reps < 1) {
        throw InvalidInputError("scenario: bootstrap calibration needs at least one replicate");
    }
    switch (error.law) {
        case ErrorLaw::Normal:
        case ErrorLaw::RescaledExponential:
            if (!(std::isfinite(error.param) && error.param > 0.0)) {
                throw InvalidInputError("scenario: error parameter must be positive");
            }
            break;
        case ErrorLaw::VonMises:
            if (!(std::isfinite(error.param) && error.param >= 0.0)) {
                throw InvalidInputError("scenario: error concentration must be nonnegative");
            }
            break;
    }
}

GeneratedSample generate_dataset(const ScenarioSpec& spec, RngStream& rng) {
    spec.validate();
    if (spec.test == TestKind::NoEffect) {
        return draw_group(spec, spec.sizes[0], spec.beta, 0.0, rng);
    }
    const double shift = (spec.test == TestKind::Parallelism) ? parallel_shift(spec.scenario) : 0.0;
    std::vector<RegressionSample> groups;
    groups.reserve(2);
    groups.push_back(draw_group(spec, spec.sizes[0], first_group_amplitude(spec.scenario), 0.0, rng));
    groups.push_back(draw_group(spec, spec.sizes[1], spec.beta, shift, rng));
    return GroupedSample::make(std::move(groups));
}

TestReport run_scenario_test(const ScenarioSpec& spec, const GeneratedSample& data,
                             std::uint64_t boot_seed) {
    const auto smoothing_for = [&](const RegressionSample& s) {
        const CvResult cv = cv_select(s, default_cv_grid(s));
        return cv.param * spec.cv_scale;
    };
    if (std::holds_alternative<RegressionSample>(data)) {
        const auto& s = std::get<RegressionSample>(data);
        const double param = smoothing_for(s);
        if (spec.scenario == Scenario::CircLin) {
            return noeffect_test_circ_lin(s, param, spec.calibration, spec.boot_reps, boot_seed);
        }
        const KernelSpec kernel = (s.predictor_kind() == VariableKind::Circular)
                                      ? KernelSpec::von_mises(param)
                                      : KernelSpec::gaussian(param);
        return noeffect_test_circ_response(s, kernel, spec.boot_reps, boot_seed);
    }
    const auto& g = std::get<GroupedSample>(data);
    const double param = smoothing_for(g.pooled());
    if (spec.scenario == Scenario::CircLin) {
        return ancova_test_circ_lin(g, param, spec.test, spec.calibration, spec.boot_reps,
                                    boot_seed);
    }
    const KernelSpec kernel = (g.predictor_kind() == VariableKind::Circular)
                                  ? KernelSpec::von_mises(param)
                                  : KernelSpec::gaussian(param);
    return ancova_test_circ_response(g, kernel, spec.test, spec.boot_reps, boot_seed);
}

StudyRow rejection_study(const ScenarioSpec& spec) {
    spec.validate();
    const auto start = std::chrono::steady_clock::now();
    const RngStream root(spec.seed);
    std::uint32_t rejections = 0;
    StudyRow row;
    for (std::uint32_t r = 0; r < spec.mc_reps; ++r) {
        RngStream data_stream = root.substream(2ULL * r);
        const std::uint64_t boot_seed = root.substream(2ULL * r + 1).id();
        try {
            const GeneratedSample data = generate_dataset(spec, data_stream);
            const TestReport report = run_scenario_test(spec, data, boot_seed);
            ++row.replicates_used;
            if (report.p_value <= spec.alpha) {
                ++rejections;
            }
        } catch (const Error&) {
            ++row.failures;
        }
    }
    if (row.replicates_used == 0) {
        throw Error("rejection_study: every replicate failed");
    }
    row.rejection_rate = static_cast<double>(rejections) / row.replicates_used;
    row.mc_se = std::sqrt(row.rejection_rate * (1.0 - row.rejection_rate) /
                          static_cast<double>(row.replicates_used));
    row.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

}  // namespace circreg
