#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "circreg/kernels.hpp"
#include "circreg/report.hpp"
#include "circreg/sample.hpp"

namespace circreg {

// Periodic pseudoresiduals of one circular-predictor group: observations
// are sorted by angle, each is interpolated from its two sorted neighbours
// (the gap past the largest angle wraps around the circle), and the
// residual is interpolation minus observation. All vectors are indexed by
// sorted position; `order` maps sorted position to the original index.
struct PseudoResiduals {
    std::vector<double> residuals;
    std::vector<double> a;   // coefficient on the previous neighbour's response
    std::vector<double> b;   // coefficient on the next neighbour's response
    std::vector<double> c2;  // normalizer a^2 + b^2 + 1
    std::vector<std::size_t> order;
};

PseudoResiduals periodic_pseudoresiduals(const RegressionSample& group);

// Groupwise and pooled variance estimates from periodic pseudoresiduals,
// together with the matrix P for which Y'P'PY = (n - I) * sigma2_pooled.
struct VarianceEstimate {
    std::vector<double> sigma2_by_group;
    double sigma2_pooled;
    Eigen::MatrixXd pmat;
};

VarianceEstimate pooled_variance(const GroupedSample& sample);

// A ratio-of-quadratic-forms statistic with its calibration matrices:
// statistic = (Y' qmat Y) / (Y' gmat Y).
struct QuadFormStat {
    double statistic;
    Eigen::MatrixXd qmat;
    Eigen::MatrixXd gmat;
};

// Equality statistic for circ->lin groups: summed squared differences
// between groupwise and pooled fits, normalized by the pooled variance.
// The same concentration is used for the pooled and groupwise fits.
QuadFormStat stat_c3(const GroupedSample& sample, double kappa);

// Estimated per-group shifts. The linear-response estimate fixes the first
// group's shift at zero and carries the I x n matrix mapping responses to
// shifts; the circular-response estimate leaves all shifts free (wmat
// stays empty) and wraps each one to [0, 2 pi).
struct ShiftEstimate {
    std::vector<double> gammas;
    Eigen::MatrixXd wmat;
};

// Least-squares shifts after removing a preliminary fit whose rows use the
// supplied per-observation concentrations (pooled order).
ShiftEstimate estimate_shifts_linear(const GroupedSample& sample,
                                     const std::vector<double>& prelim);

// Parallelism statistic for circ->lin groups: squared distance between the
// shift-corrected pooled fit plus shifts and the groupwise fits, normalized
// by the pooled variance.
QuadFormStat stat_c4(const GroupedSample& sample, double kappa,
                     const std::vector<double>& prelim);

// Equality or parallelism test for circ->lin groups, calibrated by the
// matched chi-square or by a residual bootstrap (residuals pooled across
// groups, resampled with replacement, same smoothing throughout).
TestReport ancova_test_circ_lin(const GroupedSample& sample, double kappa,
                                TestKind which, Calibration calibration,
                                std::uint32_t boot_reps = 500,
                                std::uint64_t seed = 0);

// Mean cosine distance between responses and groupwise fits (fits given as
// one flat vector in pooled order), normalized by n - I.
double dbar(const GroupedSample& sample, const std::vector<double>& group_fits);

// Equality statistic for circular-response groups: summed cosine distance
// between groupwise and pooled fits over the circular-variance estimate.
double stat_c5(const GroupedSample& sample, const KernelSpec& spec);

// Closed-form minimizer of the summed cosine distance between each group's
// responses and a preliminary pooled fit shifted by gamma_i: the direction
// of the group's residual resultant.
ShiftEstimate estimate_shifts_circular(const GroupedSample& sample,
                                       const std::vector<double>& prelim);

// Parallelism statistic for circular-response groups.
double stat_c6(const GroupedSample& sample, const KernelSpec& spec,
               const ShiftEstimate& shifts);

// Equality or parallelism test for circular-response groups (bootstrap
// calibration only). The same main and preliminary smoothing parameters are
// reused for every replicate; residuals are pooled across groups.
TestReport ancova_test_circ_response(const GroupedSample& sample, const KernelSpec& spec,
                                     TestKind which, std::uint32_t boot_reps,
                                     std::uint64_t seed);

}  // namespace circreg
