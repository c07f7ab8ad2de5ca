#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "circreg/kernels.hpp"
#include "circreg/report.hpp"
#include "circreg/rng.hpp"
#include "circreg/sample.hpp"

namespace circreg {

// Regression scenarios by (predictor, response) kind.
enum class Scenario {
    CircLin,
    LinCirc,
    CircCirc,
};

enum class ErrorLaw {
    Normal,
    RescaledExponential,
    VonMises,
};

struct ErrorSpec {
    ErrorLaw law = ErrorLaw::Normal;
    double param = 0.25;

    static ErrorSpec normal(double sd);
    // Exponential with the given rate, centered to mean zero.
    static ErrorSpec rescaled_exponential(double rate);
    static ErrorSpec von_mises(double concentration);
};

// One cell of a rejection study: the generating model, the test applied to
// each dataset, and the Monte Carlo settings.
struct ScenarioSpec {
    Scenario scenario = Scenario::CircLin;
    TestKind test = TestKind::NoEffect;
    // Amplitude of the effect: the no-effect models use beta directly, the
    // two-group models use it as the second group's amplitude.
    double beta = 0.0;
    // One entry for a no-effect study, two for the two-group comparisons.
    std::vector<std::size_t> sizes;
    ErrorSpec error = ErrorSpec{};
    // The smoothing parameter is selected by cross-validation on each
    // dataset (pooled across groups), then multiplied by this factor.
    double cv_scale = 1.0;
    Calibration calibration = Calibration::Bootstrap;
    double alpha = 0.05;
    std::uint32_t mc_reps = 500;
    std::uint32_t boot_reps = 500;
    std::uint64_t seed = 0;

    // Throws InvalidInputError when fields are inconsistent.
    void validate() const;
};

VariableKind scenario_predictor_kind(Scenario scenario);
VariableKind scenario_response_kind(Scenario scenario);

std::string to_string(Scenario scenario);
std::string to_string(ErrorLaw law);
std::string to_string(TestKind kind);
std::string to_string(Calibration calibration);

using GeneratedSample = std::variant<RegressionSample, GroupedSample>;

// Draws one dataset from the scenario's regression model. Grouped scenarios
// add the parallel-shift constant (.2 for linear responses, pi/8 for
// circular ones) to the second group when the test is a parallelism test.
GeneratedSample generate_dataset(const ScenarioSpec& spec, RngStream& rng);

// Applies the scenario's test to one dataset: cross-validated smoothing
// (scaled by cv_scale), then the matching no-effect or comparison test.
TestReport run_scenario_test(const ScenarioSpec& spec, const GeneratedSample& data,
                             std::uint64_t boot_seed);

// One row of a rejection table.
struct StudyRow {
    double rejection_rate = 0.0;
    double mc_se = 0.0;
    std::uint32_t replicates_used = 0;
    std::uint32_t failures = 0;
    double runtime_seconds = 0.0;
};

// Runs mc_reps replicates of generate-then-test and reports the fraction
// rejecting at level alpha, with the binomial standard error. Replicates
// that fail numerically are excluded and counted. Deterministic in the
// spec's seed; replicates use indexed substreams, so the row is independent
// of evaluation order.
StudyRow rejection_study(const ScenarioSpec& spec);

}  // namespace circreg
