#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "circreg/kernels.hpp"
#include "circreg/report.hpp"
#include "circreg/sample.hpp"

namespace circreg {

// Numerator and denominator matrices of a ratio-of-quadratic-forms
// statistic: statistic = (Y' bmat Y) / (Y' amat Y). Both symmetric.
struct QuadraticFormPair {
    Eigen::MatrixXd bmat;
    Eigen::MatrixXd amat;
};

struct C1Result {
    double statistic;
    QuadraticFormPair forms;
};

// No-effect statistic for a circular predictor and linear response: the
// relative drop in residual sum of squares from the constant fit to the
// kernel fit, (RSS0 - RSS) / RSS. Computed both as sums of squared
// residuals and as the equivalent ratio of quadratic forms; the two are
// cross-checked internally.
C1Result stat_c1(const RegressionSample& sample, double kappa);

// P(eps' C eps > 0) for iid standard normal eps and symmetric C, via a
// shifted and scaled chi-square matched to the first three cumulants
// nu_s = 2^{s-1} (s-1)! tr(C^s). A negative third cumulant mirrors the
// tail (negative scale), keeping all three cumulants matched.
double chi2_quadform_pvalue(const Eigen::MatrixXd& cmat);

// Full no-effect test for circ->lin data. Chi2 calibration applies
// chi2_quadform_pvalue to B - Obs*A; bootstrap calibration resamples the
// constant-fit residuals with replacement, rebuilds responses around the
// response mean, and recomputes the statistic with the same concentration.
TestReport noeffect_test_circ_lin(const RegressionSample& sample, double kappa,
                                  Calibration calibration,
                                  std::uint32_t boot_reps = 500,
                                  std::uint64_t seed = 0);

// No-effect statistic for a circular response: the relative drop in total
// cosine distance from the mean-direction fit to the kernel fit.
double stat_c2(const RegressionSample& sample, const KernelSpec& spec);

// Bootstrap no-effect test for a circular response (the only calibration
// available in this scenario). Residuals are taken about the mean
// direction, resampled with replacement, and responses rebuilt mod 2 pi.
TestReport noeffect_test_circ_response(const RegressionSample& sample,
                                       const KernelSpec& spec,
                                       std::uint32_t boot_reps, std::uint64_t seed);

}  // namespace circreg
