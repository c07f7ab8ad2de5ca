#include "circreg/rng.hpp"

#include <cmath>

#include "circreg/angles.hpp"
#include "circreg/errors.hpp"

namespace circreg {

namespace {

// splitmix64 finalizer; used to turn (id, index) pairs into well-spread
// child seeds.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : RngStream(mix64(seed), seed) {}

RngStream::RngStream(std::uint64_t id, std::uint64_t seed) : id_(id), engine_(seed) {}

RngStream RngStream::substream(std::uint64_t index) const {
    const std::uint64_t child_seed = mix64(id_ ^ mix64(index + 0x5851f42d4c957f2dULL));
    return RngStream(mix64(child_seed), child_seed);
}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::uniform() {
    // Top 53 bits -> [0, 1) on the dyadic grid.
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw InvalidInputError("RngStream::uniform: need finite lo < hi");
    }
    return lo + (hi - lo) * uniform();
}

std::size_t RngStream::uniform_index(std::size_t n) {
    if (n == 0) {
        throw InvalidInputError("RngStream::uniform_index: n must be positive");
    }
    // Rejection to remove modulo bias.
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v = next_u64();
    while (v >= limit) {
        v = next_u64();
    }
    return static_cast<std::size_t>(v % bound);
}

double RngStream::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    // 1 - u1 is in (0, 1], so the log is finite.
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(kTwoPi * u2);
}

double RngStream::exponential(double rate) {
    if (!std::isfinite(rate) || rate <= 0.0) {
        throw InvalidInputError("RngStream::exponential: rate must be finite and positive");
    }
    return -std::log(1.0 - uniform()) / rate;
}

double RngStream::von_mises(double mu, double kappa) {
    if (!std::isfinite(mu) || !std::isfinite(kappa) || kappa < 0.0) {
        throw InvalidInputError("RngStream::von_mises: bad parameters");
    }
    if (kappa < 1e-10) {
        return uniform(0.0, kTwoPi);
    }
    // Best-Fisher rejection with a wrapped-Cauchy envelope.
    const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
    const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
    const double r = (1.0 + rho * rho) / (2.0 * rho);
    for (;;) {
        const double u1 = uniform();
        const double z = std::cos(kPi * u1);
        const double f = (1.0 + r * z) / (r + z);
        const double c = kappa * (r - f);
        const double u2 = uniform();
        if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
            const double u3 = uniform();
            const double sign = (u3 > 0.5) ? 1.0 : -1.0;
            return wrap_angle(sign * std::acos(f) + mu);
        }
    }
}

std::vector<double> RngStream::von_mises_sample(std::size_t n, double mu, double kappa) {
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(von_mises(mu, kappa));
    }
    return out;
}

}  // namespace circreg
