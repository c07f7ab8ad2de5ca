#include "circreg/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "circreg/angles.hpp"
#include "circreg/bessel.hpp"
#include "circreg/errors.hpp"

namespace circreg {

namespace {

constexpr double kRcondTol = 1e-12;    // reciprocal condition of the local 2x2 system
constexpr double kResultantTol = 1e-12;  // relative resultant-length threshold

// Kernel with its normalization constant precomputed, so tight loops avoid
// repeated Bessel evaluations. The von Mises branch keeps the exponent in
// the form kappa * (cos t - 1) <= 0, which stays finite for any kappa.
struct KernelCtx {
    KernelKind kind;
    double param;
    double norm;
};

KernelCtx make_ctx(const KernelSpec& spec) {
    if (spec.kind == KernelKind::VonMises) {
        if (!std::isfinite(spec.param) || spec.param < 0.0) {
            throw InvalidInputError("kernel: concentration must be finite and nonnegative");
        }
        return {spec.kind, spec.param, 1.0 / (kTwoPi * bessel_i0(spec.param, /*scaled=*/true))};
    }
    if (!std::isfinite(spec.param) || spec.param <= 0.0) {
        throw InvalidInputError("kernel: bandwidth must be finite and positive");
    }
    return {spec.kind, spec.param, 1.0 / (spec.param * std::sqrt(kTwoPi))};
}

double ctx_eval(const KernelCtx& c, double t) {
    if (c.kind == KernelKind::VonMises) {
        return c.norm * std::exp(c.param * (std::cos(t) - 1.0));
    }
    const double z = t / c.param;
    return c.norm * std::exp(-0.5 * z * z);
}

void require_circ_lin(const RegressionSample& sample) {
    if (sample.predictor_kind() != VariableKind::Circular ||
        sample.response_kind() != VariableKind::Linear) {
        throw InvalidInputError("expected a circular predictor and a linear response");
    }
}

void require_circ_response(const RegressionSample& sample, const KernelSpec& spec) {
    if (sample.response_kind() != VariableKind::Circular) {
        throw InvalidInputError("expected a circular response");
    }
    const bool circ_pred = sample.predictor_kind() == VariableKind::Circular;
    if (circ_pred != (spec.kind == KernelKind::VonMises)) {
        throw InvalidInputError("kernel kind does not match the predictor kind");
    }
}

// Equivalent-kernel row of the local fit at theta: the weights l_j with
// fitted value sum_j l_j Y_j. Writes into row (length n); z is scratch.
void local_trig_row(const std::vector<double>& predictors, double theta,
                    const KernelCtx& ctx, double* row, std::vector<double>& z) {
    const std::size_t n = predictors.size();
    z.resize(n);
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = predictors[j] - theta;
        const double wj = ctx_eval(ctx, t);
        const double zj = std::sin(t);
        row[j] = wj;
        z[j] = zj;
        s0 += wj;
        s1 += wj * zj;
        s2 += wj * zj * zj;
    }
    const double tr = s0 + s2;
    if (!(tr > 0.0) || !std::isfinite(tr)) {
        throw SingularFitError("local fit: zero or non-finite weight mass");
    }
    const double diff = s0 - s2;
    const double lmax = 0.5 * (tr + std::sqrt(diff * diff + 4.0 * s1 * s1));
    const double det = s0 * s2 - s1 * s1;
    if (!(det > kRcondTol * lmax * lmax)) {
        throw SingularFitError("local fit: normal equations numerically singular");
    }
    const double inv = 1.0 / det;
    for (std::size_t j = 0; j < n; ++j) {
        row[j] *= (s2 - s1 * z[j]) * inv;
    }
}

std::vector<double> make_log_grid(double lo, double hi, int count) {
    std::vector<double> grid(count);
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (int i = 0; i < count; ++i) {
        const double frac = (count == 1) ? 0.0 : static_cast<double>(i) / (count - 1);
        grid[i] = std::exp(llo + frac * (lhi - llo));
    }
    return grid;
}

// Leave-one-out criterion for the circular-linear fit at one concentration:
// the full-sample hat row at Theta_j gives the left-out prediction exactly as
// (fit_j - S_jj Y_j) / (1 - S_jj). Returns +infinity when any local system
// degenerates.
double loo_criterion_circ_lin(const RegressionSample& sample, double kappa) {
    const auto& th = sample.predictors();
    const auto& y = sample.responses();
    const std::size_t n = th.size();
    KernelCtx ctx = make_ctx(KernelSpec{KernelKind::VonMises, kappa});
    std::vector<double> row(n), z;
    double crit = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        try {
            local_trig_row(th, th[j], ctx, row.data(), z);
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
        double fit = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            fit += row[k] * y[k];
        }
        const double denom = 1.0 - row[j];
        if (!(std::fabs(denom) > kRcondTol)) {
            return std::numeric_limits<double>::infinity();
        }
        const double resid = (y[j] - fit) / denom;
        crit += resid * resid;
    }
    return std::isfinite(crit) ? crit : std::numeric_limits<double>::infinity();
}

// Leave-one-out criterion for the circular-response fit at one kernel
// parameter. At the eval point Theta_j the j-th offset is zero, so removing
// observation j only subtracts its kernel-weighted sine/cosine terms from
// the resultant sums.
double loo_criterion_circ_resp(const RegressionSample& sample, const KernelSpec& spec) {
    const auto& x = sample.predictors();
    const auto& phi = sample.responses();
    const std::size_t n = x.size();
    KernelCtx ctx = make_ctx(spec);
    const bool circ_pred = spec.kind == KernelKind::VonMises;

    std::vector<double> sin_phi(n), cos_phi(n);
    for (std::size_t j = 0; j < n; ++j) {
        sin_phi[j] = std::sin(phi[j]);
        cos_phi[j] = std::cos(phi[j]);
    }
    const double k_self = ctx.norm;  // kernel weight at zero offset

    double crit = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double a = 0.0, b = 0.0, ksum = 0.0;
        double ssin = 0.0, scos = 0.0, ssin_s = 0.0, scos_s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double t = x[k] - x[j];
            const double kk = ctx_eval(ctx, t);
            const double sk = circ_pred ? std::sin(t) : t;
            a += kk * sk * sk;
            b += kk * sk;
            ksum += kk;
            ssin += kk * sin_phi[k];
            scos += kk * cos_phi[k];
            ssin_s += kk * sk * sin_phi[k];
            scos_s += kk * sk * cos_phi[k];
        }
        // The offset of observation j at its own eval point is zero, so the
        // leave-one-out sums drop only the kernel-weighted sin/cos terms.
        const double g1 = a * (ssin - k_self * sin_phi[j]) - b * ssin_s;
        const double g2 = a * (scos - k_self * cos_phi[j]) - b * scos_s;
        const double scale = (ksum - k_self) * (a + std::fabs(b));
        const double len = std::hypot(g1, g2);
        if (!(len > kResultantTol * scale) || !std::isfinite(len)) {
            return std::numeric_limits<double>::infinity();
        }
        const double fit = std::atan2(g1, g2);
        crit += 1.0 - std::cos(phi[j] - fit);
    }
    return std::isfinite(crit) ? crit : std::numeric_limits<double>::infinity();
}

}  // namespace

std::vector<double> fit_circ_lin(const RegressionSample& sample, double kappa,
                                 const std::vector<double>& eval_points) {
    require_circ_lin(sample);
    const std::size_t n = sample.size();
    if (n < 2) {
        throw TooFewObservationsError("fit_circ_lin: need at least 2 observations");
    }
    KernelCtx ctx = make_ctx(KernelSpec{KernelKind::VonMises, kappa});
    const auto& th = sample.predictors();
    const auto& y = sample.responses();
    std::vector<double> out;
    out.reserve(eval_points.size());
    std::vector<double> row(n), z;
    for (double theta : eval_points) {
        local_trig_row(th, wrap_angle(theta), ctx, row.data(), z);
        double fit = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            fit += row[j] * y[j];
        }
        out.push_back(fit);
    }
    return out;
}

Eigen::MatrixXd smoothing_matrix_circ_lin(const RegressionSample& sample, double kappa) {
    require_circ_lin(sample);
    const std::size_t n = sample.size();
    if (n < 2) {
        throw TooFewObservationsError("smoothing_matrix_circ_lin: need at least 2 observations");
    }
    KernelCtx ctx = make_ctx(KernelSpec{KernelKind::VonMises, kappa});
    const auto& th = sample.predictors();
    Eigen::MatrixXd s(n, n);
    std::vector<double> row(n), z;
    for (std::size_t r = 0; r < n; ++r) {
        local_trig_row(th, th[r], ctx, row.data(), z);
        for (std::size_t j = 0; j < n; ++j) {
            s(r, j) = row[j];
        }
    }
    return s;
}

Eigen::MatrixXd smoothing_matrix_circ_lin(const RegressionSample& sample,
                                          const std::vector<double>& row_kappas) {
    require_circ_lin(sample);
    const std::size_t n = sample.size();
    if (row_kappas.size() != n) {
        throw InvalidInputError("smoothing_matrix_circ_lin: one concentration per observation required");
    }
    if (n < 2) {
        throw TooFewObservationsError("smoothing_matrix_circ_lin: need at least 2 observations");
    }
    const auto& th = sample.predictors();
    Eigen::MatrixXd s(n, n);
    std::vector<double> row(n), z;
    for (std::size_t r = 0; r < n; ++r) {
        KernelCtx ctx = make_ctx(KernelSpec{KernelKind::VonMises, row_kappas[r]});
        local_trig_row(th, th[r], ctx, row.data(), z);
        for (std::size_t j = 0; j < n; ++j) {
            s(r, j) = row[j];
        }
    }
    return s;
}

std::vector<double> local_linear_weights(const std::vector<double>& predictors,
                                         double at, const KernelSpec& spec) {
    const std::size_t n = predictors.size();
    if (n < 2) {
        throw TooFewObservationsError("local_linear_weights: need at least 2 observations");
    }
    KernelCtx ctx = make_ctx(spec);
    const bool circ = spec.kind == KernelKind::VonMises;
    std::vector<double> k(n), s(n);
    double a = 0.0, b = 0.0, kmax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = predictors[j] - at;
        k[j] = ctx_eval(ctx, t);
        s[j] = circ ? std::sin(t) : t;
        a += k[j] * s[j] * s[j];
        b += k[j] * s[j];
        kmax = std::max(kmax, k[j]);
    }
    if (!(kmax > 0.0)) {
        throw AllZeroWeightsError("local_linear_weights: all kernel weights underflowed");
    }
    std::vector<double> w(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        w[j] = inv_n * k[j] * (a - s[j] * b);
    }
    return w;
}

std::vector<double> fit_circ_response(const RegressionSample& sample, const KernelSpec& spec,
                                      const std::vector<double>& eval_points) {
    require_circ_response(sample, spec);
    const std::size_t n = sample.size();
    if (n < 2) {
        throw TooFewObservationsError("fit_circ_response: need at least 2 observations");
    }
    const auto& x = sample.predictors();
    const auto& phi = sample.responses();
    std::vector<double> sin_phi(n), cos_phi(n);
    for (std::size_t j = 0; j < n; ++j) {
        sin_phi[j] = std::sin(phi[j]);
        cos_phi[j] = std::cos(phi[j]);
    }
    const bool circ_pred = sample.predictor_kind() == VariableKind::Circular;
    std::vector<double> out;
    out.reserve(eval_points.size());
    for (double at : eval_points) {
        const double delta = circ_pred ? wrap_angle(at) : at;
        const std::vector<double> w = local_linear_weights(x, delta, spec);
        double g1 = 0.0, g2 = 0.0, scale = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            g1 += w[j] * sin_phi[j];
            g2 += w[j] * cos_phi[j];
            scale += std::fabs(w[j]);
        }
        g1 /= static_cast<double>(n);
        g2 /= static_cast<double>(n);
        scale /= static_cast<double>(n);
        if (!(std::hypot(g1, g2) > kResultantTol * scale) || scale == 0.0) {
            throw ZeroResultantError("fit_circ_response: resultant vanishes at an eval point");
        }
        out.push_back(wrap_angle(std::atan2(g1, g2)));
    }
    return out;
}

Eigen::MatrixXd circ_response_weight_matrix(const RegressionSample& sample,
                                            const KernelSpec& spec) {
    require_circ_response(sample, spec);
    const std::size_t n = sample.size();
    if (n < 2) {
        throw TooFewObservationsError("circ_response_weight_matrix: need at least 2 observations");
    }
    const auto& x = sample.predictors();
    Eigen::MatrixXd w(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::vector<double> row = local_linear_weights(x, x[r], spec);
        for (std::size_t j = 0; j < n; ++j) {
            w(r, j) = row[j];
        }
    }
    return w;
}

Eigen::MatrixXd circ_response_weight_matrix(const RegressionSample& sample,
                                            const std::vector<double>& row_params) {
    const std::size_t n = sample.size();
    if (row_params.size() != n) {
        throw InvalidInputError("circ_response_weight_matrix: one kernel parameter per observation required");
    }
    const bool circ_pred = sample.predictor_kind() == VariableKind::Circular;
    const auto& x = sample.predictors();
    Eigen::MatrixXd w(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        const KernelSpec spec = circ_pred ? KernelSpec::von_mises(row_params[r])
                                          : KernelSpec::gaussian(row_params[r]);
        if (r == 0) {
            require_circ_response(sample, spec);
        }
        const std::vector<double> row = local_linear_weights(x, x[r], spec);
        for (std::size_t j = 0; j < n; ++j) {
            w(r, j) = row[j];
        }
    }
    return w;
}

std::vector<double> directions_from_weights(const Eigen::MatrixXd& weights,
                                            const std::vector<double>& responses) {
    const auto n = static_cast<std::size_t>(weights.cols());
    if (responses.size() != n) {
        throw InvalidInputError("directions_from_weights: response length mismatch");
    }
    Eigen::VectorXd sin_phi(n), cos_phi(n);
    for (std::size_t j = 0; j < n; ++j) {
        sin_phi[static_cast<Eigen::Index>(j)] = std::sin(responses[j]);
        cos_phi[static_cast<Eigen::Index>(j)] = std::cos(responses[j]);
    }
    const Eigen::VectorXd g1 = weights * sin_phi;
    const Eigen::VectorXd g2 = weights * cos_phi;
    const Eigen::VectorXd scale = weights.cwiseAbs().rowwise().sum();
    std::vector<double> out(static_cast<std::size_t>(weights.rows()));
    for (Eigen::Index r = 0; r < weights.rows(); ++r) {
        if (!(std::hypot(g1[r], g2[r]) > kResultantTol * scale[r]) || scale[r] == 0.0) {
            throw ZeroResultantError("directions_from_weights: resultant vanishes at a design point");
        }
        out[static_cast<std::size_t>(r)] = wrap_angle(std::atan2(g1[r], g2[r]));
    }
    return out;
}

CvResult cv_select(const RegressionSample& sample, const std::vector<double>& grid) {
    if (grid.empty()) {
        throw InvalidInputError("cv_select: empty grid");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || grid[i] <= 0.0 || (i > 0 && grid[i] <= grid[i - 1])) {
            throw InvalidInputError("cv_select: grid must be strictly ascending and positive");
        }
    }
    if (sample.size() < 3) {
        throw TooFewObservationsError("cv_select: need at least 3 observations");
    }

    const bool circ_pred = sample.predictor_kind() == VariableKind::Circular;
    const bool circ_resp = sample.response_kind() == VariableKind::Circular;
    if (!circ_pred && !circ_resp) {
        throw InvalidInputError("cv_select: linear-linear regression is not supported");
    }

    // Smoothest first: small kappa smooths hardest for a circular predictor,
    // large h for a linear one. Later (rougher) grid values must strictly
    // improve the criterion to replace the incumbent.
    std::vector<std::size_t> order(grid.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (!circ_pred) {
        std::reverse(order.begin(), order.end());
    }

    double best_param = 0.0;
    double best_crit = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t idx : order) {
        const double param = grid[idx];
        double crit;
        if (!circ_resp) {
            crit = loo_criterion_circ_lin(sample, param);
        } else {
            const KernelSpec spec = circ_pred ? KernelSpec::von_mises(param)
                                              : KernelSpec::gaussian(param);
            crit = loo_criterion_circ_resp(sample, spec);
        }
        if (std::isfinite(crit) && (!found || crit < best_crit)) {
            best_param = param;
            best_crit = crit;
            found = true;
        }
    }
    if (!found) {
        throw CvFailureError("cv_select: every grid value failed");
    }
    return CvResult{best_param, best_crit};
}

std::vector<double> default_cv_grid(const RegressionSample& sample, std::size_t count) {
    if (count < 2) {
        throw InvalidInputError("default_cv_grid: need at least 2 grid points");
    }
    const int c = static_cast<int>(count);
    if (sample.predictor_kind() == VariableKind::Circular) {
        return make_log_grid(0.1, 100.0, c);
    }
    const auto [lo, hi] = std::minmax_element(sample.predictors().begin(),
                                              sample.predictors().end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) {
        throw InvalidInputError("default_cv_grid: predictors have zero range");
    }
    return make_log_grid(0.01 * range, 2.0 * range, c);
}

std::vector<double> default_cv_grid(const RegressionSample& sample) {
    return default_cv_grid(sample, 30);
}

std::vector<double> preliminary_param_vector(const std::vector<double>& predictors,
                                             VariableKind kind) {
    const std::size_t n = predictors.size();
    if (n < 9) {
        throw TooFewObservationsError("preliminary_param_vector: need at least 9 observations");
    }
    std::vector<double> out(n);
    std::vector<double> dist;
    dist.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        dist.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            const double d = (kind == VariableKind::Circular)
                                 ? geodesic_distance(predictors[i], predictors[j])
                                 : std::fabs(predictors[i] - predictors[j]);
            dist.push_back(d);
        }
        std::nth_element(dist.begin(), dist.begin() + 7, dist.end());
        double d8 = dist[7];
        if (d8 == 0.0) {
            // Tied data: use the smallest strictly positive distance instead.
            double smallest = std::numeric_limits<double>::infinity();
            for (double d : dist) {
                if (d > 0.0) {
                    smallest = std::min(smallest, d);
                }
            }
            if (!std::isfinite(smallest)) {
                throw ZeroDistanceError("preliminary_param_vector: all pairwise distances are zero");
            }
            d8 = smallest;
        }
        out[i] = (kind == VariableKind::Circular) ? 1.0 / (d8 * d8) : d8;
    }
    return out;
}

}  // namespace circreg
