#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace circreg {

// Deterministic random stream with reproducible substreams.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard, and every variate transform below is written out explicitly, so
// a given seed produces the same draws on any platform. substream(i) derives
// an independent child stream from the parent's immutable identifier; the
// derivation is a pure function of (id, i), so the order in which substreams
// are created or consumed does not matter.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed);

    std::uint64_t id() const { return id_; }

    RngStream substream(std::uint64_t index) const;

    // Raw engine output.
    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform();

    // Uniform on [lo, hi).
    double uniform(double lo, double hi);

    // Unbiased uniform draw from {0, 1, ..., n - 1}; n must be positive.
    std::size_t uniform_index(std::size_t n);

    // Standard normal via Box-Muller (no second-variate caching, so the
    // stream state is a pure function of the number of calls made).
    double normal();

    // Exponential with the given rate, by inversion.
    double exponential(double rate);

    // Von Mises draw with mean direction mu and concentration kappa, wrapped
    // to [0, 2 pi). Uses the standard wrapped-Cauchy envelope rejection
    // sampler; kappa below 1e-10 falls back to the uniform distribution.
    double von_mises(double mu, double kappa);

    std::vector<double> von_mises_sample(std::size_t n, double mu, double kappa);

  private:
    RngStream(std::uint64_t id, std::uint64_t seed);

    std::uint64_t id_;
    std::mt19937_64 engine_;
};

}  // namespace circreg
