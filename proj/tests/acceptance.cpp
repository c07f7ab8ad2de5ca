// Acceptance gate: twelve release criteria, one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <sys/wait.h>
#include <unistd.h>

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "circreg/ancova.hpp"
#include "circreg/angles.hpp"
#include "circreg/estimators.hpp"
#include "circreg/noeffect.hpp"
#include "circreg/rng.hpp"
#include "circreg/sample.hpp"
#include "circreg/simulation.hpp"

using namespace circreg;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("CRITERION %2d: %s — %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

ScenarioSpec study(Scenario sc, TestKind test, double beta, std::vector<std::size_t> sizes,
                   ErrorSpec err, double cv_scale, Calibration cal, double alpha,
                   std::uint32_t mc, std::uint32_t boot, std::uint64_t seed) {
    ScenarioSpec s;
    s.scenario = sc;
    s.test = test;
    s.beta = beta;
    s.sizes = std::move(sizes);
    s.error = err;
    s.cv_scale = cv_scale;
    s.calibration = cal;
    s.alpha = alpha;
    s.mc_reps = mc;
    s.boot_reps = boot;
    s.seed = seed;
    return s;
}

RegressionSample circ_lin_group(RngStream& rng, std::size_t n, double amp) {
    std::vector<double> th(n), y(n);
    for (std::size_t j = 0; j < n; ++j) {
        th[j] = rng.uniform(0.0, kTwoPi);
        y[j] = amp * std::cos(th[j]) * std::sin(th[j]) + 0.25 * rng.normal();
    }
    return RegressionSample::make(th, y, VariableKind::Circular, VariableKind::Linear);
}

RegressionSample circ_circ_group(RngStream& rng, std::size_t n, double amp, double shift = 0.0) {
    std::vector<double> th(n), ph(n);
    for (std::size_t j = 0; j < n; ++j) {
        th[j] = rng.uniform(0.0, kTwoPi);
        ph[j] = wrap_angle(amp * std::sin(2.0 * th[j]) + shift + rng.von_mises(0.0, 4.0));
    }
    return RegressionSample::make(th, ph, VariableKind::Circular, VariableKind::Circular);
}

RegressionSample lin_circ_group(RngStream& rng, std::size_t n, double amp, double shift = 0.0) {
    std::vector<double> x(n), ph(n);
    for (std::size_t j = 0; j < n; ++j) {
        x[j] = rng.uniform(0.0, 1.0);
        ph[j] = wrap_angle(amp * std::sin(4.0 * x[j] - 1.0) + shift + rng.von_mises(0.0, 6.0));
    }
    return RegressionSample::make(x, ph, VariableKind::Linear, VariableKind::Circular);
}

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// ---------------------------------------------------------------------------

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto row = rejection_study(study(Scenario::CircLin, TestKind::NoEffect, 0.0, {250},
                                           ErrorSpec::normal(0.25), 0.125, Calibration::Chi2,
                                           0.05, 200, 500, 1001));
    const double secs = seconds_since(t0);
    const bool pass = std::abs(row.rejection_rate - 0.052) <= 0.045 && secs < 300.0;
    report(1, pass,
           fmt("null circ-lin chi2 n=250 scale=1/8: rate=%.3f (target .052 +/- .045), %.0fs",
               row.rejection_rate, secs));
}

void criterion_2() {
    const auto row = rejection_study(study(Scenario::CircLin, TestKind::NoEffect, 0.3, {100},
                                           ErrorSpec::normal(0.25), 1.0, Calibration::Chi2, 0.05,
                                           200, 500, 1002));
    report(2, row.rejection_rate >= 0.97,
           fmt("power circ-lin chi2 n=100 cv beta=.3: rate=%.3f (need >= .97)",
               row.rejection_rate));
}

void criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto row = rejection_study(study(Scenario::CircCirc, TestKind::NoEffect, 0.5, {100},
                                           ErrorSpec::von_mises(4.0), 1.0,
                                           Calibration::Bootstrap, 0.05, 200, 300, 1003));
    const double secs = seconds_since(t0);
    const bool pass = std::abs(row.rejection_rate - 0.980) <= 0.05 && secs < 1800.0;
    report(3, pass,
           fmt("power circ-circ noeffect n=100 cv beta=.5: rate=%.3f (target .980 +/- .05), %.0fs",
               row.rejection_rate, secs));
}

void criterion_4() {
    const auto row = rejection_study(study(Scenario::CircCirc, TestKind::Equality, 2.0,
                                           {100, 100}, ErrorSpec::von_mises(4.0), 1.0,
                                           Calibration::Bootstrap, 0.05, 200, 300, 1004));
    report(4, std::abs(row.rejection_rate - 0.052) <= 0.045,
           fmt("null circ-circ equality (100,100): rate=%.3f (target .052 +/- .045)",
               row.rejection_rate));
}

void criterion_5() {
    const auto row = rejection_study(study(Scenario::LinCirc, TestKind::Parallelism, 1.5,
                                           {50, 50}, ErrorSpec::von_mises(6.0), 1.0,
                                           Calibration::Bootstrap, 0.05, 200, 500, 1005));
    report(5, std::abs(row.rejection_rate - 0.938) <= 0.06,
           fmt("power lin-circ parallelism (50,50) beta=1.5: rate=%.3f (target .938 +/- .06)",
               row.rejection_rate));
}

void criterion_6() {
    // Declared spot cells: the alpha=.10 circ-lin chi2 null (n=50, scale
    // 1/8; reference .100) and the alpha=.01 circ-circ no-effect null
    // (n=50, scale 1/8; reference .010).
    const auto high = rejection_study(study(Scenario::CircLin, TestKind::NoEffect, 0.0, {50},
                                            ErrorSpec::normal(0.25), 0.125, Calibration::Chi2,
                                            0.10, 200, 500, 1006));
    const auto low = rejection_study(study(Scenario::CircCirc, TestKind::NoEffect, 0.0, {50},
                                           ErrorSpec::von_mises(4.0), 0.125,
                                           Calibration::Bootstrap, 0.01, 200, 300, 1007));
    const double band_high = 3.0 * std::sqrt(0.10 * 0.90 / 200.0);
    const double band_low = 3.0 * std::sqrt(0.01 * 0.99 / 200.0);
    const bool ok_high = std::abs(high.rejection_rate - 0.100) <= band_high;
    const bool ok_low = std::abs(low.rejection_rate - 0.010) <= band_low;
    report(6, ok_high && ok_low,
           fmt("spot cells: alpha=.10 rate=%.3f (.100 +/- %.3f), alpha=.01 rate=%.3f "
               "(.010 +/- %.3f)",
               high.rejection_rate, band_high, low.rejection_rate, band_low));
}

void criterion_7() {
    const auto t0 = std::chrono::steady_clock::now();
    RngStream rng(1010);
    double worst = 0.0;
    const double step = 1e-4;
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<RegressionSample> parts;
        if (rep % 2 == 0) {
            parts.push_back(circ_circ_group(rng, 12, 2.0));
            parts.push_back(circ_circ_group(rng, 12, 2.0, kPi / 8.0));
        } else {
            parts.push_back(lin_circ_group(rng, 12, 2.0));
            parts.push_back(lin_circ_group(rng, 12, 2.0, 0.4));
        }
        const auto gs = GroupedSample::make(parts);
        const auto pooled = gs.pooled();
        const auto prelim =
            preliminary_param_vector(pooled.predictors(), gs.predictor_kind());
        const auto est = estimate_shifts_circular(gs, prelim);

        const Eigen::MatrixXd w1 = circ_response_weight_matrix(pooled, prelim);
        const auto m1 = directions_from_weights(w1, pooled.responses());
        std::size_t offset = 0;
        for (std::size_t i = 0; i < 2; ++i) {
            const std::size_t ni = gs.group(i).size();
            const auto objective = [&](double gamma) {
                double acc = 0.0;
                for (std::size_t j = 0; j < ni; ++j)
                    acc += 1.0 -
                           std::cos(pooled.responses()[offset + j] - gamma - m1[offset + j]);
                return acc;
            };
            double best = 0.0, bestval = objective(0.0);
            for (double g = step; g < kTwoPi; g += step) {
                const double v = objective(g);
                if (v < bestval) {
                    bestval = v;
                    best = g;
                }
            }
            worst = std::max(worst, geodesic_distance(est.gammas[i], best));
            offset += ni;
        }
    }
    const double secs = seconds_since(t0);
    const bool pass = worst <= step + 1e-9 && secs < 60.0;
    report(7, pass,
           fmt("closed-form shifts vs 1e-4 grid search: worst gap=%.2e (allow 1e-4), %.1fs",
               worst, secs));
}

void criterion_8() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        auto rng = RngStream(1011).substream(rep);
        const int n = 5 + int(rng.uniform_index(16));  // sizes 5..20
        Eigen::MatrixXd c(n, n);
        for (int r = 0; r < n; ++r)
            for (int s = r; s < n; ++s) c(r, s) = c(s, r) = rng.normal();
        const double approx = chi2_quadform_pvalue(c);

        auto mc_rng = RngStream(777).substream(rep);
        int hits = 0;
        const int draws = 100000;
        Eigen::VectorXd z(n);
        for (int d = 0; d < draws; ++d) {
            for (int r = 0; r < n; ++r) z(r) = mc_rng.normal();
            if (z.dot(c * z) > 0.0) ++hits;
        }
        worst = std::max(worst, std::abs(approx - double(hits) / draws));
    }
    const double secs = seconds_since(t0);
    const bool pass = worst < 0.01 && secs < 120.0;
    report(8, pass,
           fmt("chi2 tail approximation vs 1e5-draw MC on 20 matrices: worst |diff|=%.4f "
               "(need < .01), %.1fs",
               worst, secs));
}

void criterion_9() {
    RngStream rng(1012);
    double worst = 0.0;
    // No-effect statistic: ratio definition vs quadratic forms.
    for (int rep = 0; rep < 50; ++rep) {
        const auto s = circ_lin_group(rng, 25, rng.uniform(0.0, 1.0));
        const double kappa = rng.uniform(1.0, 10.0);
        const auto res = stat_c1(s, kappa);
        const Eigen::Map<const Eigen::VectorXd> y(s.responses().data(), s.size());
        const double ratio = y.dot(res.forms.bmat * y) / y.dot(res.forms.amat * y);
        worst = std::max(worst, std::abs(res.statistic - ratio) /
                                    std::max({1.0, std::abs(res.statistic), std::abs(ratio)}));
    }
    // Comparison statistics: fit-based sums vs quadratic forms.
    for (int rep = 0; rep < 50; ++rep) {
        RngStream local = rng.substream(rep);
        const auto gs = GroupedSample::make(
            {circ_lin_group(local, 10, 1.0), circ_lin_group(local, 12, 1.3)});
        const double kappa = local.uniform(1.0, 8.0);
        const auto pooled = gs.pooled();
        const Eigen::Map<const Eigen::VectorXd> y(pooled.responses().data(), pooled.size());

        const auto c3 = stat_c3(gs, kappa);
        const double r3 = y.dot(c3.qmat * y) / y.dot(c3.gmat * y);
        worst = std::max(worst, std::abs(c3.statistic - r3) /
                                    std::max({1.0, std::abs(c3.statistic), std::abs(r3)}));

        const auto prelim =
            preliminary_param_vector(pooled.predictors(), VariableKind::Circular);
        const auto c4 = stat_c4(gs, kappa, prelim);
        const double r4 = y.dot(c4.qmat * y) / y.dot(c4.gmat * y);
        worst = std::max(worst, std::abs(c4.statistic - r4) /
                                    std::max({1.0, std::abs(c4.statistic), std::abs(r4)}));
    }
    report(9, worst <= 1e-8,
           fmt("dual statistic formulas on 50 datasets each: worst rel diff=%.2e (allow 1e-8)",
               worst));
}

void criterion_10() {
    int bad = 0;
    std::string first_bad;
    const auto expect = [&](bool ok, const char* name) {
        if (!ok) {
            ++bad;
            if (first_bad.empty()) first_bad = name;
        }
    };

    {  // no-effect statistic: affine response invariance
        RngStream rng(1013);
        for (int rep = 0; rep < 100; ++rep) {
            const auto s = circ_lin_group(rng, 20, 1.0);
            const double kappa = rng.uniform(1.0, 10.0);
            const double base = stat_c1(s, kappa).statistic;
            double a = rng.uniform(-4.0, 4.0);
            if (std::abs(a) < 0.1) a = 2.0;
            const double c = rng.uniform(-5.0, 5.0);
            std::vector<double> y = s.responses();
            for (auto& v : y) v = a * v + c;
            expect(close_rel(stat_c1(s.with_responses(y), kappa).statistic, base, 1e-8),
                   "noeffect affine");
        }
    }
    {  // circular-response no-effect statistic: rotation invariance
        RngStream rng(1014);
        for (int rep = 0; rep < 100; ++rep) {
            const auto s = circ_circ_group(rng, 20, 1.0);
            const auto spec = KernelSpec::von_mises(rng.uniform(2.0, 10.0));
            const double base = stat_c2(s, spec);
            const double delta = rng.uniform(0.0, kTwoPi);
            std::vector<double> ph = s.responses();
            for (auto& v : ph) v = wrap_angle(v + delta);
            expect(std::abs(stat_c2(s.with_responses(ph), spec) - base) <= 1e-10 *
                       std::max(1.0, std::abs(base)),
                   "noeffect rotation");
        }
    }
    {  // equality statistic: affine invariance
        RngStream rng(1015);
        for (int rep = 0; rep < 100; ++rep) {
            const auto gs = GroupedSample::make(
                {circ_lin_group(rng, 10, 1.0), circ_lin_group(rng, 11, 1.0)});
            const double kappa = rng.uniform(1.0, 8.0);
            const double base = stat_c3(gs, kappa).statistic;
            double a = rng.uniform(-4.0, 4.0);
            if (std::abs(a) < 0.1) a = 3.0;
            const double c = rng.uniform(-6.0, 6.0);
            std::vector<double> y = gs.pooled().responses();
            for (auto& v : y) v = a * v + c;
            expect(close_rel(stat_c3(gs.with_pooled_responses(y), kappa).statistic, base, 1e-8),
                   "equality affine");
        }
    }
    {  // parallelism statistic: common-constant invariance
        RngStream rng(1016);
        for (int rep = 0; rep < 100; ++rep) {
            const auto gs = GroupedSample::make(
                {circ_lin_group(rng, 10, 1.0), circ_lin_group(rng, 11, 1.0)});
            const double kappa = rng.uniform(1.0, 8.0);
            const auto prelim =
                preliminary_param_vector(gs.pooled().predictors(), VariableKind::Circular);
            const double base = stat_c4(gs, kappa, prelim).statistic;
            const double c = rng.uniform(-8.0, 8.0);
            std::vector<double> y = gs.pooled().responses();
            for (auto& v : y) v += c;
            expect(close_rel(stat_c4(gs.with_pooled_responses(y), kappa, prelim).statistic,
                             base, 1e-8),
                   "parallelism constant");
        }
    }
    {  // circular equality/parallelism statistics: rotation invariance
        RngStream rng(1017);
        for (int rep = 0; rep < 100; ++rep) {
            const auto gs = GroupedSample::make(
                {circ_circ_group(rng, 9, 2.0), circ_circ_group(rng, 10, 2.0, kPi / 8.0)});
            const auto spec = KernelSpec::von_mises(rng.uniform(4.0, 12.0));
            const auto prelim =
                preliminary_param_vector(gs.pooled().predictors(), VariableKind::Circular);
            const double b5 = stat_c5(gs, spec);
            const double b6 = stat_c6(gs, spec, estimate_shifts_circular(gs, prelim));
            const double delta = rng.uniform(0.0, kTwoPi);
            std::vector<double> ph = gs.pooled().responses();
            for (auto& v : ph) v = wrap_angle(v + delta);
            const auto gs2 = gs.with_pooled_responses(ph);
            expect(std::abs(stat_c5(gs2, spec) - b5) <= 1e-10 * std::max(1.0, std::abs(b5)),
                   "circular equality rotation");
            expect(std::abs(stat_c6(gs2, spec, estimate_shifts_circular(gs2, prelim)) - b6) <=
                       1e-10 * std::max(1.0, std::abs(b6)),
                   "circular parallelism rotation");
        }
    }
    {  // estimator: permutation invariance and affine equivariance
        RngStream rng(1018);
        for (int rep = 0; rep < 100; ++rep) {
            const auto s = circ_lin_group(rng, 15, 1.0);
            const double kappa = rng.uniform(1.0, 20.0);
            const std::vector<double> eval = {0.3, 2.0, 4.4};
            const auto base = fit_circ_lin(s, kappa, eval);

            std::vector<std::size_t> idx(s.size());
            for (std::size_t j = 0; j < idx.size(); ++j) idx[j] = j;
            for (std::size_t j = idx.size(); j > 1; --j)
                std::swap(idx[j - 1], idx[rng.uniform_index(j)]);
            std::vector<double> pth(s.size()), py(s.size());
            for (std::size_t j = 0; j < s.size(); ++j) {
                pth[j] = s.predictors()[idx[j]];
                py[j] = s.responses()[idx[j]];
            }
            const auto perm = RegressionSample::make(pth, py, VariableKind::Circular,
                                                     VariableKind::Linear);
            const auto permfit = fit_circ_lin(perm, kappa, eval);

            const double a = rng.uniform(-3.0, 3.0);
            const double c = rng.uniform(-5.0, 5.0);
            std::vector<double> ay = s.responses();
            for (auto& v : ay) v = a * v + c;
            const auto afffit = fit_circ_lin(s.with_responses(ay), kappa, eval);
            for (std::size_t k = 0; k < eval.size(); ++k) {
                expect(std::abs(permfit[k] - base[k]) <= 1e-10 * std::max(1.0, std::abs(base[k])),
                       "fit permutation");
                expect(std::abs(afffit[k] - (a * base[k] + c)) <=
                           1e-9 * std::max(1.0, std::abs(a * base[k] + c)),
                       "fit affine");
            }
        }
    }
    {  // circular-response estimator: rotation equivariance
        RngStream rng(1019);
        for (int rep = 0; rep < 100; ++rep) {
            const auto s = circ_circ_group(rng, 15, 1.5);
            const auto spec = KernelSpec::von_mises(rng.uniform(2.0, 12.0));
            const std::vector<double> eval = {0.7, 3.1, 5.2};
            const auto base = fit_circ_response(s, spec, eval);
            const double delta = rng.uniform(0.0, kTwoPi);
            std::vector<double> ph = s.responses();
            for (auto& v : ph) v = wrap_angle(v + delta);
            const auto rot = fit_circ_response(s.with_responses(ph), spec, eval);
            for (std::size_t k = 0; k < eval.size(); ++k)
                expect(geodesic_distance(rot[k], wrap_angle(base[k] + delta)) <= 1e-10,
                       "circular fit rotation");
        }
    }
    report(10, bad == 0,
           bad == 0 ? "rotation/affine/permutation invariance suites: 8 suites x >=100 cases"
                    : fmt("invariance failures: %d (first: %s)", bad, first_bad.c_str()));
}

void criterion_11() {
    RngStream root(1020);
    const double sigma = 0.4;
    double acc = 0.0;
    const int reps = 500;
    for (int rep = 0; rep < reps; ++rep) {
        auto rng = root.substream(rep);
        std::vector<double> th(200), y(200);
        for (int j = 0; j < 200; ++j) {
            th[j] = rng.uniform(0.0, kTwoPi);
            y[j] = sigma * rng.normal();
        }
        const auto s = RegressionSample::make(th, y, VariableKind::Circular,
                                              VariableKind::Linear);
        const auto res = periodic_pseudoresiduals(s);
        double v = 0.0;
        for (int j = 0; j < 200; ++j) v += res.residuals[j] * res.residuals[j] / res.c2[j];
        acc += v / 200.0;
    }
    const double mean = acc / reps;
    const bool pass = std::abs(mean - sigma * sigma) <= 0.05 * sigma * sigma;
    report(11, pass,
           fmt("pseudoresidual variance, 500 reps at n=200: mean=%.4f vs %.4f (5%% band)",
               mean, sigma * sigma));
}

void criterion_12(const std::string& cli) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("circreg_acc_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const auto path = [&](const std::string& name) { return (dir / name).string(); };
    const auto run = [&](const std::string& args) {
        const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2> /dev/null";
        const int rc = std::system(cmd.c_str());
        return rc == -1 ? -1 : WEXITSTATUS(rc);
    };
    const auto slurp = [&](const std::string& name) {
        std::ifstream in(path(name), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    // Shared input data.
    RngStream rng(1021);
    std::string csv = "predictor,response,group\n";
    std::string nogroup = "predictor,response\n";
    char buf[80];
    for (int g = 0; g < 2; ++g)
        for (int j = 0; j < 25; ++j) {
            const double th = rng.uniform(0.0, kTwoPi);
            const double ph =
                wrap_angle(2.0 * std::sin(2.0 * th) + rng.von_mises(0.0, 4.0));
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g", th, ph);
            csv += std::string(buf) + "," + (g == 0 ? "1" : "2") + "\n";
            if (g == 0) nogroup += std::string(buf) + "\n";
        }
    std::ofstream(path("data.csv"), std::ios::binary) << csv;
    std::ofstream(path("single.csv"), std::ios::binary) << nogroup;
    std::ofstream(path("study.json"), std::ios::binary)
        << "{\"studies\": [{\"scenario\": \"circ_circ\", \"test\": \"noeffect\", \"beta\": 0.5,"
           " \"n\": 30, \"error\": {\"law\": \"von_mises\", \"param\": 4.0}, \"cv_scale\": 1.0,"
           " \"calibration\": \"bootstrap\", \"alpha\": 0.05, \"mc_reps\": 20,"
           " \"boot_reps\": 99, \"seed\": 5}]}\n";

    bool pass = true;
    std::string detail;
    const auto check_pair = [&](const char* what, int rc1, int rc2, const std::string& a,
                                const std::string& b) {
        if (rc1 != 0 || rc2 != 0 || slurp(a) != slurp(b) || slurp(a).empty()) {
            pass = false;
            if (detail.empty()) detail = std::string("mismatch in ") + what;
        }
    };

    int rc1 = run("fit " + path("single.csv") + " --scenario circ_circ --cv --out " +
                  path("fit1.csv"));
    int rc2 = run("fit " + path("single.csv") + " --scenario circ_circ --cv --out " +
                  path("fit2.csv"));
    check_pair("fit csv", rc1, rc2, "fit1.csv", "fit2.csv");
    check_pair("fit sidecar", rc1, rc2, "fit1.csv.json", "fit2.csv.json");

    rc1 = run("test " + path("data.csv") +
              " --scenario circ_circ --test parallelism --calibration bootstrap --cv"
              " --boot-reps 99 --seed 12 --out " +
              path("test1.json"));
    rc2 = run("test " + path("data.csv") +
              " --scenario circ_circ --test parallelism --calibration bootstrap --cv"
              " --boot-reps 99 --seed 12 --out " +
              path("test2.json"));
    check_pair("test json", rc1, rc2, "test1.json", "test2.json");

    rc1 = run("trace " + path("data.csv") +
              " --scenario circ_circ --test equality --calibration bootstrap --boot-reps 49"
              " --seed 9 --param-min 2 --param-max 12 --param-count 6 --out-csv " +
              path("trace1.csv"));
    rc2 = run("trace " + path("data.csv") +
              " --scenario circ_circ --test equality --calibration bootstrap --boot-reps 49"
              " --seed 9 --param-min 2 --param-max 12 --param-count 6 --out-csv " +
              path("trace2.csv"));
    check_pair("trace csv", rc1, rc2, "trace1.csv", "trace2.csv");

    rc1 = run("simulate " + path("study.json") + " --out " + path("sim1.csv"));
    rc2 = run("simulate " + path("study.json") + " --out " + path("sim2.csv"));
    check_pair("simulate csv", rc1, rc2, "sim1.csv", "sim2.csv");
    check_pair("simulate manifest", rc1, rc2, "sim1.csv.manifest.json", "sim2.csv.manifest.json");

    std::error_code ec;
    fs::remove_all(dir, ec);
    report(12, pass,
           pass ? "fit/test/trace/simulate reruns byte-identical" : detail);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-cli-binary>\n");
        return 64;
    }
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12(argv[1]);
    std::printf("%d of 12 criteria failed\n", g_failures);
    return g_failures;
}
