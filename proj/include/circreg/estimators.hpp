#pragma once

#include <Eigen/Dense>
#include <vector>

#include "circreg/kernels.hpp"
#include "circreg/sample.hpp"

namespace circreg {

// --- Circular predictor, linear response -----------------------------------
//
// Local fit of Y on a circular predictor: at each evaluation point theta the
// model a + b sin(Theta_j - theta) is fitted by least squares with von Mises
// kernel weights, and the fitted value is the local intercept. The intercept
// is unchanged by the sign convention inside the sine, so offsets are taken
// as data minus evaluation point throughout.

// Fitted values at eval_points (angles, wrapped internally).
std::vector<double> fit_circ_lin(const RegressionSample& sample, double kappa,
                                 const std::vector<double>& eval_points);

// Hat matrix at the design points: row r reproduces the fit at predictor r,
// so (S * Y)_r = fit at Theta_r and S * 1 = 1.
Eigen::MatrixXd smoothing_matrix_circ_lin(const RegressionSample& sample, double kappa);

// Same, with one concentration parameter per row (attached to the row's
// evaluation point). Used by the preliminary shift-estimation fits.
Eigen::MatrixXd smoothing_matrix_circ_lin(const RegressionSample& sample,
                                          const std::vector<double>& row_kappas);

// --- Circular response ------------------------------------------------------
//
// The circular-response fit is the direction of a weighted resultant:
// m(delta) = atan2(g1, g2) with g1 = (1/n) sum_j sin(Phi_j) W_j and
// g2 = (1/n) sum_j cos(Phi_j) W_j.

// Local-linear style weights W_j at one evaluation point. Circular
// predictors use sine offsets with a von Mises kernel, linear predictors
// plain offsets with a Gaussian kernel; the choice follows spec.kind.
// Weights are returned unnormalized (they carry a 1/n factor but do not sum
// to one); only their direction matters downstream.
std::vector<double> local_linear_weights(const std::vector<double>& predictors,
                                         double at, const KernelSpec& spec);

// Fitted directions in [0, 2 pi) at eval_points.
std::vector<double> fit_circ_response(const RegressionSample& sample, const KernelSpec& spec,
                                      const std::vector<double>& eval_points);

// Weight matrix at the design points: row r holds the weights W_j for the
// fit at predictor r. Combined with responses via directions_from_weights.
Eigen::MatrixXd circ_response_weight_matrix(const RegressionSample& sample,
                                            const KernelSpec& spec);

// Same, one kernel parameter per row (kernel kind follows the predictor
// kind). Used by the preliminary shift-estimation fits.
Eigen::MatrixXd circ_response_weight_matrix(const RegressionSample& sample,
                                            const std::vector<double>& row_params);

// Directions atan2(W * sin(responses), W * cos(responses)) row by row,
// wrapped to [0, 2 pi). Lets bootstrap replicates reuse a precomputed
// weight matrix.
std::vector<double> directions_from_weights(const Eigen::MatrixXd& weights,
                                            const std::vector<double>& responses);

// --- Smoothing selection ----------------------------------------------------

struct CvResult {
    double param;      // selected grid value
    double criterion;  // leave-one-out criterion at the selection
};

// Leave-one-out cross-validation over an ascending grid of kernel
// parameters (kappa for circular predictors, h for linear ones). Squared
// error loss for linear responses, cosine loss 1 - cos(Phi - fit) for
// circular responses. Grid points where the fit degenerates score +infinity;
// ties go to the smoothest parameter (smallest kappa, largest h).
CvResult cv_select(const RegressionSample& sample, const std::vector<double>& grid);

// Log-spaced default grid: kappa in [0.1, 100] (circular predictor) or h in
// [0.01 * range, 2 * range] (linear predictor), 30 points.
std::vector<double> default_cv_grid(const RegressionSample& sample);
std::vector<double> default_cv_grid(const RegressionSample& sample, std::size_t count);

// --- Preliminary per-observation smoothing ----------------------------------

// Nearest-neighbour rule for the preliminary shift-estimation fits: each
// observation gets the distance to its 8th nearest neighbour among all
// observations (geodesic for circular predictors, absolute difference for
// linear ones). Circular entries are converted to concentrations 1/d^2;
// linear entries are bandwidths d. A zero 8th-neighbour distance falls back
// to the observation's smallest positive distance.
std::vector<double> preliminary_param_vector(const std::vector<double>& predictors,
                                             VariableKind kind);

}  // namespace circreg
