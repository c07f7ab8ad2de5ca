#include "circreg/noeffect.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <vector>

#include "circreg/angles.hpp"
#include "circreg/errors.hpp"
#include "circreg/estimators.hpp"
#include "circreg/rng.hpp"

namespace circreg {

namespace {

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// (RSS0 - RSS) / RSS from a precomputed smoothing matrix; cheap enough to
// run once per bootstrap replicate.
double c1_from_smoother(const Eigen::MatrixXd& smoother, const Eigen::VectorXd& y) {
    const double ybar = y.mean();
    const double rss0 = (y.array() - ybar).square().sum();
    const double rss = (y - smoother * y).squaredNorm();
    if (rss <= 1e-14 * y.squaredNorm()) {
        throw DegenerateResidualsError("no-effect statistic: kernel fit interpolates the responses");
    }
    return (rss0 - rss) / rss;
}

// Cosine-distance analogue of the RSS ratio, from precomputed fitted
// directions; recomputes the resample's own mean direction.
double c2_from_fit(const std::vector<double>& phi, const std::vector<double>& fit) {
    const double gamma = mean_direction(phi);
    double dist0 = 0.0;
    double dist1 = 0.0;
    for (std::size_t j = 0; j < phi.size(); ++j) {
        dist0 += 1.0 - std::cos(phi[j] - gamma);
        dist1 += 1.0 - std::cos(phi[j] - fit[j]);
    }
    if (dist1 <= 1e-14 * static_cast<double>(phi.size())) {
        throw DegenerateResidualsError("no-effect statistic: kernel fit interpolates the responses");
    }
    return (dist0 - dist1) / dist1;
}

void check_dual_forms(double scalar_form, double matrix_form) {
    if (!(std::fabs(scalar_form - matrix_form) <=
          1e-8 * std::max(1.0, std::fabs(scalar_form)))) {
        throw Error("internal: residual-sum and quadratic-form statistics disagree");
    }
}

QuadraticFormPair c1_forms(const Eigen::MatrixXd& smoother) {
    const Eigen::Index n = smoother.rows();
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd resid_op = eye - smoother;
    QuadraticFormPair forms;
    forms.amat = resid_op.transpose() * resid_op;
    forms.bmat = eye - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n)) - forms.amat;
    return forms;
}

}  // namespace

C1Result stat_c1(const RegressionSample& sample, double kappa) {
    const Eigen::MatrixXd smoother = smoothing_matrix_circ_lin(sample, kappa);
    const Eigen::VectorXd y = to_vector(sample.responses());
    const double stat = c1_from_smoother(smoother, y);
    QuadraticFormPair forms = c1_forms(smoother);
    const double matrix_form = y.dot(forms.bmat * y) / y.dot(forms.amat * y);
    check_dual_forms(stat, matrix_form);
    return C1Result{stat, std::move(forms)};
}

double chi2_quadform_pvalue(const Eigen::MatrixXd& cmat) {
    if (cmat.rows() == 0 || cmat.rows() != cmat.cols()) {
        throw InvalidInputError("chi2_quadform_pvalue: need a nonempty square matrix");
    }
    const double nu1 = cmat.trace();
    const Eigen::MatrixXd csq = cmat * cmat;
    const double nu2 = 2.0 * csq.trace();
    // tr(C^3) = sum_ij (C^2)_ij C_ij for symmetric C; avoids a second product.
    const double nu3 = 8.0 * csq.cwiseProduct(cmat).sum();
    if (!std::isfinite(nu1) || !std::isfinite(nu2) || !std::isfinite(nu3)) {
        throw InvalidInputError("chi2_quadform_pvalue: non-finite cumulants");
    }
    if (!(nu2 > 0.0) || nu3 == 0.0) {
        throw DegenerateCumulantsError("chi2_quadform_pvalue: cumulants do not admit the approximation");
    }
    const double scale = nu3 / (4.0 * nu2);
    const double dof = 8.0 * nu2 * nu2 * nu2 / (nu3 * nu3);
    const double shift = nu1 - scale * dof;
    if (!std::isfinite(dof) || !(dof > 0.0)) {
        throw DegenerateCumulantsError("chi2_quadform_pvalue: degrees of freedom overflow");
    }
    const double q = -shift / scale;
    double p;
    if (q <= 0.0) {
        p = (nu3 > 0.0) ? 1.0 : 0.0;
    } else {
        const boost::math::chi_squared_distribution<double> dist(dof);
        const double cdf = boost::math::cdf(dist, q);
        p = (nu3 > 0.0) ? 1.0 - cdf : cdf;
    }
    return std::clamp(p, 0.0, 1.0);
}

TestReport noeffect_test_circ_lin(const RegressionSample& sample, double kappa,
                                  Calibration calibration,
                                  std::uint32_t boot_reps, std::uint64_t seed) {
    const Eigen::MatrixXd smoother = smoothing_matrix_circ_lin(sample, kappa);
    const Eigen::VectorXd y = to_vector(sample.responses());
    const double obs = c1_from_smoother(smoother, y);

    TestReport report;
    report.kind = TestKind::NoEffect;
    report.statistic = obs;
    report.smoothing = KernelSpec::von_mises(kappa);
    report.calibration = calibration;

    if (calibration == Calibration::Chi2) {
        QuadraticFormPair forms = c1_forms(smoother);
        const double matrix_form = y.dot(forms.bmat * y) / y.dot(forms.amat * y);
        check_dual_forms(obs, matrix_form);
        report.p_value = chi2_quadform_pvalue(forms.bmat - obs * forms.amat);
        return report;
    }

    if (boot_reps < 1) {
        throw InvalidInputError("noeffect_test_circ_lin: bootstrap needs at least one replicate");
    }
    const Eigen::Index n = y.size();
    const double ybar = y.mean();
    const Eigen::VectorXd resid = y.array() - ybar;

    const RngStream root(seed);
    Eigen::VectorXd ystar(n);
    std::uint32_t exceed = 0;
    for (std::uint32_t b = 0; b < boot_reps; ++b) {
        RngStream stream = root.substream(b);
        for (Eigen::Index j = 0; j < n; ++j) {
            ystar[j] = ybar + resid[static_cast<Eigen::Index>(
                                  stream.uniform_index(static_cast<std::size_t>(n)))];
        }
        if (c1_from_smoother(smoother, ystar) >= obs) {
            ++exceed;
        }
    }
    report.p_value = static_cast<double>(exceed) / static_cast<double>(boot_reps);
    report.boot_reps = boot_reps;
    report.seed = seed;
    return report;
}

double stat_c2(const RegressionSample& sample, const KernelSpec& spec) {
    const std::vector<double> fit = fit_circ_response(sample, spec, sample.predictors());
    return c2_from_fit(sample.responses(), fit);
}

TestReport noeffect_test_circ_response(const RegressionSample& sample,
                                       const KernelSpec& spec,
                                       std::uint32_t boot_reps, std::uint64_t seed) {
    if (boot_reps < 1) {
        throw InvalidInputError("noeffect_test_circ_response: bootstrap needs at least one replicate");
    }
    const Eigen::MatrixXd weights = circ_response_weight_matrix(sample, spec);
    const std::vector<double>& phi = sample.responses();
    const std::size_t n = phi.size();

    const std::vector<double> fit = directions_from_weights(weights, phi);
    const double obs = c2_from_fit(phi, fit);
    const double gamma = mean_direction(phi);
    std::vector<double> resid(n);
    for (std::size_t j = 0; j < n; ++j) {
        resid[j] = phi[j] - gamma;
    }

    const RngStream root(seed);
    std::vector<double> phistar(n);
    std::uint32_t exceed = 0;
    for (std::uint32_t b = 0; b < boot_reps; ++b) {
        RngStream stream = root.substream(b);
        for (std::size_t j = 0; j < n; ++j) {
            phistar[j] = wrap_angle(gamma + resid[stream.uniform_index(n)]);
        }
        const std::vector<double> fitstar = directions_from_weights(weights, phistar);
        if (c2_from_fit(phistar, fitstar) >= obs) {
            ++exceed;
        }
    }

    TestReport report;
    report.kind = TestKind::NoEffect;
    report.statistic = obs;
    report.p_value = static_cast<double>(exceed) / static_cast<double>(boot_reps);
    report.calibration = Calibration::Bootstrap;
    report.smoothing = spec;
    report.boot_reps = boot_reps;
    report.seed = seed;
    return report;
}

}  // namespace circreg
