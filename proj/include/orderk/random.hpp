#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace orderk {

// 64-bit mix (splitmix64 finalizer). Used for stream derivation and seeding.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_combine64(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ (mix64(b) + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2)));
}

/// Identifies a reproducible random stream. Identical (seed, stream_id)
/// always produce the identical variate sequence; distinct stream_ids give
/// statistically independent streams. Streams can be split hierarchically
/// with child(), which is how replications get private sub-streams without
/// any coordination between worker threads.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    [[nodiscard]] RngStream child(std::uint64_t i) const {
        return RngStream{seed, hash_combine64(stream_id, i)};
    }
};

/// xoshiro256++ generator seeded from an RngStream via splitmix64.
class Rng {
public:
    explicit Rng(RngStream stream) {
        std::uint64_t s = hash_combine64(stream.seed, stream.stream_id);
        for (auto& w : state_) {
            s += 0x9E3779B97F4A7C15ull;
            w = mix64(s);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on [0,1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0,1]; safe as a log() argument.
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double a = 2.0 * 3.14159265358979323846 * uniform();
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    /// Gamma(shape, rate) by Marsaglia-Tsang squeeze; shape < 1 boosted via
    /// the Gamma(shape+1) * U^{1/shape} identity.
    double gamma(double shape, double rate) {
        if (!(shape > 0.0) || !(rate > 0.0))
            throw std::invalid_argument("gamma sampler requires positive shape and rate");
        if (shape < 1.0) {
            const double u = uniform_pos();
            return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x;
            double v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
        }
    }

    /// Inverse Gaussian(mean, shape) by the Michael-Schucany-Haas
    /// transform-with-roots method. The smaller root is computed in a
    /// cancellation-free form.
    double inverse_gaussian(double mean, double shape) {
        if (!(mean > 0.0) || !(shape > 0.0))
            throw std::invalid_argument("inverse_gaussian sampler requires positive mean and shape");
        const double z = normal();
        const double w = mean * z * z;
        const double root = 1.0 - 2.0 * w / (w + std::sqrt(w * (w + 4.0 * shape)));
        const double x = mean * root;
        if (uniform() <= mean / (mean + x)) return x;
        return mean * mean / x;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace orderk
