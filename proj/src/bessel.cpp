#include "circreg/bessel.hpp"

#include <cmath>
#include <limits>

#include "circreg/angles.hpp"
#include "circreg/errors.hpp"

namespace circreg {

namespace {

constexpr double kSeriesCutoff = 15.0;

// Power series sum_m ((kappa/2)^2)^m / (m!)^2, converges fast below the
// cutoff (term ratio q/m^2 with q <= 56.25).
double i0_series(double kappa) {
    const double q = 0.25 * kappa * kappa;
    double term = 1.0;
    double sum = 1.0;
    for (int m = 1; m <= 80; ++m) {
        term *= q / (static_cast<double>(m) * static_cast<double>(m));
        sum += term;
        if (term < sum * std::numeric_limits<double>::epsilon()) {
            break;
        }
    }
    return sum;
}

// exp(-kappa) * I0(kappa) ~ (2*pi*kappa)^{-1/2} * sum_k a_k / kappa^k with
// a_0 = 1, a_k = a_{k-1} * (2k-1)^2 / (8k). The series is asymptotic: sum
// until the terms stop decreasing.
double i0_scaled_asymptotic(double kappa) {
    double term = 1.0;
    double sum = 1.0;
    double prev = std::numeric_limits<double>::max();
    for (int k = 1; k <= 40; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= odd * odd / (8.0 * k * kappa);
        if (std::fabs(term) >= prev || std::fabs(term) < sum * std::numeric_limits<double>::epsilon()) {
            break;
        }
        sum += term;
        prev = std::fabs(term);
    }
    return sum / std::sqrt(kTwoPi * kappa);
}

}  // namespace

double bessel_i0(double kappa, bool scaled) {
    if (!std::isfinite(kappa) || kappa < 0.0) {
        throw InvalidInputError("bessel_i0: kappa must be finite and nonnegative");
    }
    if (kappa < kSeriesCutoff) {
        const double v = i0_series(kappa);
        return scaled ? v * std::exp(-kappa) : v;
    }
    const double v = i0_scaled_asymptotic(kappa);
    return scaled ? v : v * std::exp(kappa);
}

}  // namespace circreg
