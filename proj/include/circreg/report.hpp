#pragma once

#include <cstdint>
#include <optional>

#include "circreg/kernels.hpp"

namespace circreg {

enum class Calibration {
    Chi2,       // shifted-scaled chi-square approximation
    Bootstrap,  // residual bootstrap
};

enum class TestKind {
    NoEffect,     // flat curve against the fitted curve
    Equality,     // one common curve across groups
    Parallelism,  // common shape, per-group shifts
};

// Outcome of one hypothesis test run.
struct TestReport {
    TestKind kind;
    double statistic;
    double p_value;
    Calibration calibration;
    KernelSpec smoothing;
    // Set for bootstrap calibration only.
    std::optional<std::uint32_t> boot_reps;
    std::optional<std::uint64_t> seed;
};

}  // namespace circreg
