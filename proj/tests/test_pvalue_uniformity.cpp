// Distributional property check, kept in its own binary because it probes a
// stronger statement than tail calibration: across 500 null datasets
// (n=100, concentration = cv/8), the chi-square-calibrated p-values should
// be approximately uniform, with Kolmogorov-Smirnov distance below 0.08.
//
// The check is implemented exactly as stated and currently fails, for a
// structural reason worth recording: the concentration is selected by
// cross-validation on the same responses, so the statistic's conditional
// null law depends on the selection. Replacing the chi-square approximation
// by the exact law of the quadratic form (Imhof's method) still leaves a
// KS distance near 0.13, so no calibration of the statistic can pass this
// bound when the smoothing parameter is data-driven; the approximation
// itself contributes only part of the observed distance. Tail calibration
// at the .05 level (what the rejection-rate studies consume) holds; see
// the companion check in test_noeffect.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "circreg/angles.hpp"
#include "circreg/estimators.hpp"
#include "circreg/noeffect.hpp"
#include "circreg/rng.hpp"
#include "circreg/sample.hpp"

using namespace circreg;

namespace {

double ks_uniform(std::vector<double> p) {
    std::sort(p.begin(), p.end());
    const double n = double(p.size());
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        d = std::max(d, std::abs(p[i] - double(i + 1) / n));
        d = std::max(d, std::abs(p[i] - double(i) / n));
    }
    return d;
}

}  // namespace

TEST_CASE("null p-values with cv/8 smoothing are uniform to KS < 0.08") {
    RngStream root(50);
    std::vector<double> pvals;
    pvals.reserve(500);
    int rejections = 0;
    for (int rep = 0; rep < 500; ++rep) {
        auto rng = root.substream(rep);
        std::vector<double> th(100), y(100);
        for (int j = 0; j < 100; ++j) {
            th[j] = rng.uniform(0.0, kTwoPi);
            y[j] = 0.25 * rng.normal();
        }
        const auto s =
            RegressionSample::make(th, y, VariableKind::Circular, VariableKind::Linear);
        const double kappa = cv_select(s, default_cv_grid(s)).param / 8.0;
        const double p = noeffect_test_circ_lin(s, kappa, Calibration::Chi2).p_value;
        pvals.push_back(p);
        if (p <= 0.05) ++rejections;
    }
    const double ks = ks_uniform(pvals);

    std::vector<double> sorted = pvals;
    std::sort(sorted.begin(), sorted.end());
    std::printf("measured KS distance: %.3f (bound 0.08)\n", ks);
    std::printf("rejection rate at alpha=.05: %.3f\n", rejections / 500.0);
    std::printf("p-value deciles:");
    for (int d = 1; d < 10; ++d) std::printf(" %.3f", sorted[std::size_t(d * 50) - 1]);
    std::printf("\n");

    CHECK(ks < 0.08);
}
