#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace wtail {

namespace detail {

// SplitMix64 finalizer (Stafford mix 13). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kStreamSalt = 0x853c49e6748fea9bULL;

}  // namespace detail

// Counter-based generator: output i of a stream is mix64(key + i*gamma),
// with the key derived from (master_seed, stream_index) by double avalanche
// mixing. Streams with distinct indices run disjointly keyed counter
// sequences, so per-replication decorrelation is constructive rather than
// relying on a shared state being partitioned.
//
// Copyable value type; all variate draws advance only this object's counter,
// so distinct instances are safe to use concurrently.
class SeededStream {
public:
    SeededStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept
        : master_(master_seed),
          index_(stream_index),
          key_(derive_key(master_seed, stream_index)) {}

    std::uint64_t master_seed() const noexcept { return master_; }
    std::uint64_t stream_index() const noexcept { return index_; }

    std::uint64_t next_u64() noexcept {
        counter_ += detail::kGoldenGamma;
        return detail::mix64(key_ + counter_);
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard exponential, strictly positive (zero-probability underflow
    // draws are rejected).
    double exponential() noexcept {
        for (;;) {
            const double u = uniform01();
            if (u > 0.0) return -std::log(u);
        }
    }

    // Standard normal via Box-Muller (cosine branch only; one variate per
    // pair of uniforms keeps the draw count deterministic).
    double normal() noexcept {
        for (;;) {
            const double u1 = uniform01();
            if (u1 <= 0.0) continue;
            const double u2 = uniform01();
            constexpr double two_pi = 6.283185307179586476925286766559;
            return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
        }
    }

    // Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 boosted through
    // Gamma(shape + 1) * U^(1/shape).
    double gamma(double shape) noexcept {
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            for (;;) {
                const double u = uniform01();
                if (u > 0.0) return g * std::pow(u, 1.0 / shape);
            }
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            const double u = uniform01();
            if (u <= 0.0) continue;
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

private:
    static std::uint64_t derive_key(std::uint64_t master, std::uint64_t index) noexcept {
        return detail::mix64(detail::mix64(master + detail::kGoldenGamma) ^
                             detail::mix64(index ^ detail::kStreamSalt));
    }

    std::uint64_t master_ = 0;
    std::uint64_t index_ = 0;
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace wtail
