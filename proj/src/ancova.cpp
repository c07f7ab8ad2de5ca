#include "circreg/ancova.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "circreg/angles.hpp"
#include "circreg/errors.hpp"
#include "circreg/estimators.hpp"
#include "circreg/noeffect.hpp"
#include "circreg/rng.hpp"

namespace circreg {

namespace {

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<std::size_t> group_offsets(const GroupedSample& sample) {
    std::vector<std::size_t> offsets(sample.group_count());
    std::size_t acc = 0;
    for (std::size_t i = 0; i < sample.group_count(); ++i) {
        offsets[i] = acc;
        acc += sample.group(i).size();
    }
    return offsets;
}

void require_circ_lin_groups(const GroupedSample& sample) {
    if (sample.predictor_kind() != VariableKind::Circular ||
        sample.response_kind() != VariableKind::Linear) {
        throw InvalidInputError("expected circular predictors and linear responses");
    }
}

void require_circ_response_groups(const GroupedSample& sample) {
    if (sample.response_kind() != VariableKind::Circular) {
        throw InvalidInputError("expected circular responses");
    }
}

Eigen::MatrixXd blockdiag_smoothers(const GroupedSample& sample, double kappa) {
    const std::size_t n = sample.total_size();
    Eigen::MatrixXd sd = Eigen::MatrixXd::Zero(n, n);
    std::size_t offset = 0;
    for (std::size_t i = 0; i < sample.group_count(); ++i) {
        const std::size_t ni = sample.group(i).size();
        sd.block(static_cast<Eigen::Index>(offset), static_cast<Eigen::Index>(offset),
                 static_cast<Eigen::Index>(ni), static_cast<Eigen::Index>(ni)) =
            smoothing_matrix_circ_lin(sample.group(i), kappa);
        offset += ni;
    }
    return sd;
}

Eigen::MatrixXd indicator_matrix(const GroupedSample& sample) {
    const std::size_t n = sample.total_size();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, sample.group_count());
    std::size_t offset = 0;
    for (std::size_t i = 0; i < sample.group_count(); ++i) {
        for (std::size_t j = 0; j < sample.group(i).size(); ++j) {
            d(static_cast<Eigen::Index>(offset + j), static_cast<Eigen::Index>(i)) = 1.0;
        }
        offset += sample.group(i).size();
    }
    return d;
}

double variance_floor(const Eigen::VectorXd& y) {
    return 1e-14 * (1.0 + y.squaredNorm() / static_cast<double>(y.size()));
}

void check_dual_forms(double scalar_form, double matrix_form) {
    if (!(std::fabs(scalar_form - matrix_form) <=
          1e-8 * std::max(1.0, std::fabs(scalar_form)))) {
        throw Error("internal: scalar and quadratic-form statistics disagree");
    }
}

// Groupwise circ->lin fits at each group's own design points, flattened in
// pooled order.
std::vector<double> groupwise_fits_circ_lin(const GroupedSample& sample, double kappa) {
    std::vector<double> fits;
    fits.reserve(sample.total_size());
    for (std::size_t i = 0; i < sample.group_count(); ++i) {
        const auto& g = sample.group(i);
        const std::vector<double> fi = fit_circ_lin(g, kappa, g.predictors());
        fits.insert(fits.end(), fi.begin(), fi.end());
    }
    return fits;
}

// Groupwise circular-response fits from precomputed per-group weight
// matrices, flattened in pooled order.
std::vector<double> groupwise_fits_from_weights(const std::vector<Eigen::MatrixXd>& wgroups,
                                                const std::vector<double>& phi_flat,
                                                const std::vector<std::size_t>& offsets) {
    std::vector<double> fits;
    fits.reserve(phi_flat.size());
    for (std::size_t i = 0; i < wgroups.size(); ++i) {
        const std::size_t ni = static_cast<std::size_t>(wgroups[i].rows());
        const std::vector<double> slice(phi_flat.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
                                        phi_flat.begin() + static_cast<std::ptrdiff_t>(offsets[i] + ni));
        const std::vector<double> fi = directions_from_weights(wgroups[i], slice);
        fits.insert(fits.end(), fi.begin(), fi.end());
    }
    return fits;
}

// Shift directions from a preliminary pooled fit: each group's shift is the
// direction of the resultant of its residual angles.
ShiftEstimate shifts_from_prelim_fit(const GroupedSample& sample,
                                     const std::vector<double>& prelim_fit,
                                     const std::vector<double>& phi_flat) {
    const std::vector<std::size_t> offsets = group_offsets(sample);
    std::vector<double> gammas(sample.group_count());
    for (std::size_t i = 0; i < sample.group_count(); ++i) {
        const std::size_t ni = sample.group(i).size();
        double ci = 0.0;
        double si = 0.0;
        for (std::size_t j = 0; j < ni; ++j) {
            const double d = phi_flat[offsets[i] + j] - prelim_fit[offsets[i] + j];
            ci += std::cos(d);
            si += std::sin(d);
        }
        if (!(std::hypot(ci, si) > 1e-12 * static_cast<double>(ni))) {
            throw ZeroResultantError("shift estimation: residual resultant vanishes in a group");
        }
        gammas[i] = wrap_angle(std::atan2(si, ci));
    }
    return ShiftEstimate{std::move(gammas), Eigen::MatrixXd()};
}

}  // namespace

PseudoResiduals periodic_pseudoresiduals(const RegressionSample& group) {
    if (group.predictor_kind() != VariableKind::Circular ||
        group.response_kind() != VariableKind::Linear) {
        throw InvalidInputError("periodic_pseudoresiduals: expected a circular predictor and a linear response");
    }
    const std::size_t n = group.size();
    if (n < 3) {
        throw TooFewObservationsError("periodic_pseudoresiduals: need at least 3 observations");
    }
    const auto& th = group.predictors();
    const auto& y = group.responses();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return th[a] < th[b]; });

    // gap[j]: arc from sorted angle j to sorted angle j+1; the last arc wraps
    // past 2 pi back to the smallest angle.
    std::vector<double> gap(n);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        gap[j] = th[order[j + 1]] - th[order[j]];
    }
    gap[n - 1] = kTwoPi - (th[order[n - 1]] - th[order[0]]);
    for (double g : gap) {
        if (g == 0.0) {
            throw DuplicatePredictorsError("periodic_pseudoresiduals: tied predictor angles");
        }
    }

    PseudoResiduals out;
    out.residuals.resize(n);
    out.a.resize(n);
    out.b.resize(n);
    out.c2.resize(n);
    out.order = order;
    for (std::size_t j = 0; j < n; ++j) {
        const double g_prev = gap[(j + n - 1) % n];
        const double g_next = gap[j];
        const double denom = g_prev + g_next;
        const double aj = g_next / denom;
        const double bj = g_prev / denom;
        const double y_prev = y[order[(j + n - 1) % n]];
        const double y_next = y[order[(j + 1) % n]];
        out.a[j] = aj;
        out.b[j] = bj;
        out.residuals[j] = aj * y_prev + bj * y_next - y[order[j]];
        out.c2[j] = aj * aj + bj * bj + 1.0;
    }
    return out;
}

VarianceEstimate pooled_variance(const GroupedSample& sample) {
    require_circ_lin_groups(sample);
    const std::size_t n = sample.total_size();
    const std::size_t ngroups = sample.group_count();
    const std::vector<std::size_t> offsets = group_offsets(sample);

    VarianceEstimate out;
    out.sigma2_by_group.resize(ngroups);
    out.pmat = Eigen::MatrixXd::Zero(n, n);

    double weighted = 0.0;
    for (std::size_t i = 0; i < ngroups; ++i) {
        const auto& g = sample.group(i);
        const std::size_t ni = g.size();
        const PseudoResiduals psr = periodic_pseudoresiduals(g);
        double acc = 0.0;
        for (std::size_t j = 0; j < ni; ++j) {
            acc += psr.residuals[j] * psr.residuals[j] / psr.c2[j];
        }
        out.sigma2_by_group[i] = acc / static_cast<double>(ni);
        weighted += acc;

        // Row for sorted position j: the scaled interpolation functional
        // a/c at the previous neighbour, b/c at the next, -1/c at itself,
        // in pooled (global) column coordinates.
        for (std::size_t j = 0; j < ni; ++j) {
            const double c = std::sqrt(psr.c2[j]);
            const auto row = static_cast<Eigen::Index>(offsets[i] + psr.order[j]);
            const auto col_prev =
                static_cast<Eigen::Index>(offsets[i] + psr.order[(j + ni - 1) % ni]);
            const auto col_next =
                static_cast<Eigen::Index>(offsets[i] + psr.order[(j + 1) % ni]);
            const auto col_self = static_cast<Eigen::Index>(offsets[i] + psr.order[j]);
            out.pmat(row, col_prev) += psr.a[j] / c;
            out.pmat(row, col_next) += psr.b[j] / c;
            out.pmat(row, col_self) += -1.0 / c;
        }
    }
    out.sigma2_pooled = weighted / static_cast<double>(n - ngroups);
    return out;
}

QuadFormStat stat_c3(const GroupedSample& sample, double kappa) {
    require_circ_lin_groups(sample);
    const RegressionSample pooled = sample.pooled();
    const Eigen::VectorXd y = to_vector(pooled.responses());
    const std::size_t n = pooled.size();
    const std::size_t ngroups = sample.group_count();

    const VarianceEstimate var = pooled_variance(sample);
    if (!(var.sigma2_pooled > variance_floor(y))) {
        throw DegenerateVarianceError("stat_c3: pooled variance estimate vanishes");
    }

    const std::vector<double> fit_pool = fit_circ_lin(pooled, kappa, pooled.predictors());
    const std::vector<double> fit_groups = groupwise_fits_circ_lin(sample, kappa);
    double num = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double d = fit_groups[r] - fit_pool[r];
        num += d * d;
    }
    const double stat = num / var.sigma2_pooled;

    const Eigen::MatrixXd smoother = smoothing_matrix_circ_lin(pooled, kappa);
    const Eigen::MatrixXd sd = blockdiag_smoothers(sample, kappa);
    const Eigen::MatrixXd diff = sd - smoother;
    QuadFormStat out;
    out.qmat = diff.transpose() * diff;
    out.gmat = (var.pmat.transpose() * var.pmat) / static_cast<double>(n - ngroups);
    const double matrix_form = y.dot(out.qmat * y) / y.dot(out.gmat * y);
    check_dual_forms(stat, matrix_form);
    out.statistic = stat;
    return out;
}

ShiftEstimate estimate_shifts_linear(const GroupedSample& sample,
                                     const std::vector<double>& prelim) {
    require_circ_lin_groups(sample);
    const RegressionSample pooled = sample.pooled();
    const std::size_t n = pooled.size();
    if (prelim.size() != n) {
        throw InvalidInputError("estimate_shifts_linear: one preliminary parameter per observation required");
    }
    const std::size_t ngroups = sample.group_count();

    const Eigen::MatrixXd s1 = smoothing_matrix_circ_lin(pooled, prelim);
    const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - s1;
    const Eigen::MatrixXd d = indicator_matrix(sample);
    // First group's shift is fixed at zero: its indicator column is dropped
    // before solving, then the zero is prepended.
    const Eigen::MatrixXd md = m * d.rightCols(static_cast<Eigen::Index>(ngroups - 1));
    const Eigen::MatrixXd sys = md.transpose() * md;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (!(sv(0) > 0.0) || !(sv(sv.size() - 1) > 1e-12 * sv(0))) {
        throw SingularShiftSystemError("estimate_shifts_linear: shift system numerically singular");
    }
    const Eigen::MatrixXd wtail = svd.solve(md.transpose() * m);

    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(ngroups, n);
    w.bottomRows(static_cast<Eigen::Index>(ngroups - 1)) = wtail;
    const Eigen::VectorXd gam = w * to_vector(pooled.responses());
    return ShiftEstimate{std::vector<double>(gam.data(), gam.data() + gam.size()), w};
}

QuadFormStat stat_c4(const GroupedSample& sample, double kappa,
                     const std::vector<double>& prelim) {
    require_circ_lin_groups(sample);
    const RegressionSample pooled = sample.pooled();
    const Eigen::VectorXd y = to_vector(pooled.responses());
    const std::size_t n = pooled.size();
    const std::size_t ngroups = sample.group_count();

    const VarianceEstimate var = pooled_variance(sample);
    if (!(var.sigma2_pooled > variance_floor(y))) {
        throw DegenerateVarianceError("stat_c4: pooled variance estimate vanishes");
    }

    const ShiftEstimate shifts = estimate_shifts_linear(sample, prelim);
    const Eigen::MatrixXd d = indicator_matrix(sample);
    const Eigen::VectorXd shift_per_obs = d * to_vector(shifts.gammas);

    // Scalar form: shift-corrected pooled fit plus shifts versus raw
    // groupwise fits.
    std::vector<double> corrected(n);
    for (std::size_t r = 0; r < n; ++r) {
        corrected[r] = y[static_cast<Eigen::Index>(r)] - shift_per_obs[static_cast<Eigen::Index>(r)];
    }
    const RegressionSample corrected_sample = pooled.with_responses(std::move(corrected));
    const std::vector<double> fit_pool = fit_circ_lin(corrected_sample, kappa, pooled.predictors());
    const std::vector<double> fit_groups = groupwise_fits_circ_lin(sample, kappa);
    double num = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double dev = shift_per_obs[static_cast<Eigen::Index>(r)] + fit_pool[r] - fit_groups[r];
        num += dev * dev;
    }
    const double stat = num / var.sigma2_pooled;

    const Eigen::MatrixXd smoother = smoothing_matrix_circ_lin(pooled, kappa);
    const Eigen::MatrixXd sd = blockdiag_smoothers(sample, kappa);
    const Eigen::MatrixXd dw = d * shifts.wmat;
    const Eigen::MatrixXd r =
        dw + smoother * (Eigen::MatrixXd::Identity(n, n) - dw) - sd;
    QuadFormStat out;
    out.qmat = r.transpose() * r;
    out.gmat = (var.pmat.transpose() * var.pmat) / static_cast<double>(n - ngroups);
    const double matrix_form = y.dot(out.qmat * y) / y.dot(out.gmat * y);
    check_dual_forms(stat, matrix_form);
    out.statistic = stat;
    return out;
}

TestReport ancova_test_circ_lin(const GroupedSample& sample, double kappa,
                                TestKind which, Calibration calibration,
                                std::uint32_t boot_reps, std::uint64_t seed) {
    if (which == TestKind::NoEffect) {
        throw InvalidInputError("ancova_test_circ_lin: expected an equality or parallelism test");
    }
    require_circ_lin_groups(sample);
    const RegressionSample pooled = sample.pooled();
    const Eigen::VectorXd y = to_vector(pooled.responses());
    const std::size_t n = pooled.size();
    const std::size_t ngroups = sample.group_count();

    std::vector<double> prelim;
    if (which == TestKind::Parallelism) {
        prelim = preliminary_param_vector(pooled.predictors(), VariableKind::Circular);
    }
    const QuadFormStat qf = (which == TestKind::Equality)
                                ? stat_c3(sample, kappa)
                                : stat_c4(sample, kappa, prelim);

    TestReport report;
    report.kind = which;
    report.statistic = qf.statistic;
    report.smoothing = KernelSpec::von_mises(kappa);
    report.calibration = calibration;

    if (calibration == Calibration::Chi2) {
        report.p_value = chi2_quadform_pvalue(qf.qmat - qf.statistic * qf.gmat);
        return report;
    }

    if (boot_reps < 1) {
        throw InvalidInputError("ancova_test_circ_lin: bootstrap needs at least one replicate");
    }

    // Precomputed linear operators make each replicate a pair of
    // matrix-vector products.
    const Eigen::MatrixXd smoother = smoothing_matrix_circ_lin(pooled, kappa);
    const Eigen::MatrixXd sd = blockdiag_smoothers(sample, kappa);
    const VarianceEstimate var = pooled_variance(sample);
    Eigen::MatrixXd num_op;
    Eigen::VectorXd fitted;
    if (which == TestKind::Equality) {
        num_op = sd - smoother;
        fitted = smoother * y;
    } else {
        const ShiftEstimate shifts = estimate_shifts_linear(sample, prelim);
        const Eigen::MatrixXd d = indicator_matrix(sample);
        const Eigen::MatrixXd dw = d * shifts.wmat;
        num_op = dw + smoother * (Eigen::MatrixXd::Identity(n, n) - dw) - sd;
        const Eigen::VectorXd shift_per_obs = d * to_vector(shifts.gammas);
        fitted = shift_per_obs + smoother * (y - shift_per_obs);
    }
    const Eigen::VectorXd resid = y - fitted;
    const double dof = static_cast<double>(n - ngroups);
    const auto matrix_stat = [&](const Eigen::VectorXd& yy) {
        const double denom = (var.pmat * yy).squaredNorm();
        if (!(denom > 0.0)) {
            throw DegenerateVarianceError("ancova_test_circ_lin: bootstrap variance vanishes");
        }
        return dof * (num_op * yy).squaredNorm() / denom;
    };
    const double obs = matrix_stat(y);

    const RngStream root(seed);
    Eigen::VectorXd ystar(static_cast<Eigen::Index>(n));
    std::uint32_t exceed = 0;
    for (std::uint32_t b = 0; b < boot_reps; ++b) {
        RngStream stream = root.substream(b);
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j) {
            ystar[j] = fitted[j] + resid[static_cast<Eigen::Index>(stream.uniform_index(n))];
        }
        if (matrix_stat(ystar) >= obs) {
            ++exceed;
        }
    }
    report.p_value = static_cast<double>(exceed) / static_cast<double>(boot_reps);
    report.boot_reps = boot_reps;
    report.seed = seed;
    return report;
}

double dbar(const GroupedSample& sample, const std::vector<double>& group_fits) {
    require_circ_response_groups(sample);
    const std::size_t n = sample.total_size();
    if (group_fits.size() != n) {
        throw InvalidInputError("dbar: one fitted value per observation required");
    }
    const RegressionSample pooled = sample.pooled();
    const auto& phi = pooled.responses();
    double acc = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        acc += 1.0 - std::cos(phi[r] - group_fits[r]);
    }
    return acc / static_cast<double>(n - sample.group_count());
}

double stat_c5(const GroupedSample& sample, const KernelSpec& spec) {
    require_circ_response_groups(sample);
    const RegressionSample pooled = sample.pooled();
    const std::vector<double> fit_pool = fit_circ_response(pooled, spec, pooled.predictors());
    std::vector<double> fit_groups;
    fit_groups.reserve(pooled.size());
    for (std::size_t i = 0; i < sample.group_count(); ++i) {
        const auto& g = sample.group(i);
        const std::vector<double> fi = fit_circ_response(g, spec, g.predictors());
        fit_groups.insert(fit_groups.end(), fi.begin(), fi.end());
    }
    const double dd = dbar(sample, fit_groups);
    if (!(dd > 1e-14)) {
        throw DegenerateVarianceError("stat_c5: circular variance estimate vanishes");
    }
    double acc = 0.0;
    for (std::size_t r = 0; r < pooled.size(); ++r) {
        acc += 1.0 - std::cos(fit_groups[r] - fit_pool[r]);
    }
    return acc / dd;
}

ShiftEstimate estimate_shifts_circular(const GroupedSample& sample,
                                       const std::vector<double>& prelim) {
    require_circ_response_groups(sample);
    const RegressionSample pooled = sample.pooled();
    if (prelim.size() != pooled.size()) {
        throw InvalidInputError("estimate_shifts_circular: one preliminary parameter per observation required");
    }
    const Eigen::MatrixXd w1 = circ_response_weight_matrix(pooled, prelim);
    const std::vector<double> prelim_fit = directions_from_weights(w1, pooled.responses());
    return shifts_from_prelim_fit(sample, prelim_fit, pooled.responses());
}

double stat_c6(const GroupedSample& sample, const KernelSpec& spec,
               const ShiftEstimate& shifts) {
    require_circ_response_groups(sample);
    if (shifts.gammas.size() != sample.group_count()) {
        throw InvalidInputError("stat_c6: one shift per group required");
    }
    const RegressionSample pooled = sample.pooled();
    const std::vector<double> fit_pool = fit_circ_response(pooled, spec, pooled.predictors());
    std::vector<double> fit_groups;
    fit_groups.reserve(pooled.size());
    for (std::size_t i = 0; i < sample.group_count(); ++i) {
        const auto& g = sample.group(i);
        const std::vector<double> fi = fit_circ_response(g, spec, g.predictors());
        fit_groups.insert(fit_groups.end(), fi.begin(), fi.end());
    }
    const double dd = dbar(sample, fit_groups);
    if (!(dd > 1e-14)) {
        throw DegenerateVarianceError("stat_c6: circular variance estimate vanishes");
    }
    const std::vector<std::size_t> offsets = group_offsets(sample);
    double acc = 0.0;
    for (std::size_t i = 0; i < sample.group_count(); ++i) {
        for (std::size_t j = 0; j < sample.group(i).size(); ++j) {
            const std::size_t r = offsets[i] + j;
            acc += 1.0 - std::cos(shifts.gammas[i] + fit_pool[r] - fit_groups[r]);
        }
    }
    return acc / dd;
}

TestReport ancova_test_circ_response(const GroupedSample& sample, const KernelSpec& spec,
                                     TestKind which, std::uint32_t boot_reps,
                                     std::uint64_t seed) {
    if (which == TestKind::NoEffect) {
        throw InvalidInputError("ancova_test_circ_response: expected an equality or parallelism test");
    }
    require_circ_response_groups(sample);
    if (boot_reps < 1) {
        throw InvalidInputError("ancova_test_circ_response: bootstrap needs at least one replicate");
    }
    const RegressionSample pooled = sample.pooled();
    const std::vector<double>& phi = pooled.responses();
    const std::size_t n = pooled.size();
    const std::size_t ngroups = sample.group_count();
    const std::vector<std::size_t> offsets = group_offsets(sample);

    const Eigen::MatrixXd wpool = circ_response_weight_matrix(pooled, spec);
    std::vector<Eigen::MatrixXd> wgroups;
    wgroups.reserve(ngroups);
    for (std::size_t i = 0; i < ngroups; ++i) {
        wgroups.push_back(circ_response_weight_matrix(sample.group(i), spec));
    }
    Eigen::MatrixXd wprelim;
    if (which == TestKind::Parallelism) {
        const std::vector<double> prelim =
            preliminary_param_vector(pooled.predictors(), pooled.predictor_kind());
        wprelim = circ_response_weight_matrix(pooled, prelim);
    }

    const double dof = static_cast<double>(n - ngroups);
    // Statistic of one response vector; shifts are re-estimated per call for
    // the parallelism test (same preliminary weights throughout).
    const auto eval_stat = [&](const std::vector<double>& ph,
                               std::vector<double>* pool_fit_out,
                               ShiftEstimate* shifts_out) {
        const std::vector<double> fit_pool = directions_from_weights(wpool, ph);
        const std::vector<double> fit_groups = groupwise_fits_from_weights(wgroups, ph, offsets);
        double dd = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            dd += 1.0 - std::cos(ph[r] - fit_groups[r]);
        }
        dd /= dof;
        if (!(dd > 1e-14)) {
            throw DegenerateVarianceError("ancova_test_circ_response: circular variance vanishes");
        }
        double acc = 0.0;
        if (which == TestKind::Equality) {
            for (std::size_t r = 0; r < n; ++r) {
                acc += 1.0 - std::cos(fit_groups[r] - fit_pool[r]);
            }
        } else {
            const std::vector<double> prelim_fit = directions_from_weights(wprelim, ph);
            ShiftEstimate shifts = shifts_from_prelim_fit(sample, prelim_fit, ph);
            for (std::size_t i = 0; i < ngroups; ++i) {
                for (std::size_t j = 0; j < sample.group(i).size(); ++j) {
                    const std::size_t r = offsets[i] + j;
                    acc += 1.0 - std::cos(shifts.gammas[i] + fit_pool[r] - fit_groups[r]);
                }
            }
            if (shifts_out != nullptr) {
                *shifts_out = std::move(shifts);
            }
        }
        if (pool_fit_out != nullptr) {
            *pool_fit_out = fit_pool;
        }
        return acc / dd;
    };

    std::vector<double> pool_fit;
    ShiftEstimate shifts;
    const double obs = eval_stat(phi, &pool_fit, &shifts);

    // Fitted values under the null hypothesis, residuals about them.
    std::vector<double> fitted(n);
    for (std::size_t i = 0; i < ngroups; ++i) {
        const double shift = (which == TestKind::Parallelism) ? shifts.gammas[i] : 0.0;
        for (std::size_t j = 0; j < sample.group(i).size(); ++j) {
            const std::size_t r = offsets[i] + j;
            fitted[r] = shift + pool_fit[r];
        }
    }
    std::vector<double> resid(n);
    for (std::size_t r = 0; r < n; ++r) {
        resid[r] = phi[r] - fitted[r];
    }

    const RngStream root(seed);
    std::vector<double> phistar(n);
    std::uint32_t exceed = 0;
    for (std::uint32_t b = 0; b < boot_reps; ++b) {
        RngStream stream = root.substream(b);
        for (std::size_t r = 0; r < n; ++r) {
            phistar[r] = wrap_angle(fitted[r] + resid[stream.uniform_index(n)]);
        }
        if (eval_stat(phistar, nullptr, nullptr) >= obs) {
            ++exceed;
        }
    }

    TestReport report;
    report.kind = which;
    report.statistic = obs;
    report.p_value = static_cast<double>(exceed) / static_cast<double>(boot_reps);
    report.calibration = Calibration::Bootstrap;
    report.smoothing = spec;
    report.boot_reps = boot_reps;
    report.seed = seed;
    return report;
}

}  // namespace circreg
