#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>

#include "indicate/normal.hpp"

namespace indicate {

// Seeded RNG owning all draw algorithms used by the samplers, so that a
// given (seed, call sequence) reproduces bit-identically across builds.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, std::uint64_t stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        engine_.seed(seq);
    }

    // Uniform on (0, 1), never returning the endpoints.
    double uniform() {
        const double scale = 1.0 / 9007199254740992.0;  // 2^-53
        double u;
        do {
            u = static_cast<double>(engine_() >> 11) * scale;
        } while (u <= 0.0);
        return u;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        std::uniform_int_distribution<int> d(lo, hi);
        return d(engine_);
    }

    // Marsaglia polar method with a cached spare.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        has_spare_ = true;
        return u * factor;
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    double gamma(double shape, double rate) {
        std::gamma_distribution<double> d(shape, 1.0 / rate);
        return d(engine_);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // N(mean, sd^2) truncated to [lo, hi] by inverse-CDF sampling. Handles
    // intervals deep in either tail; the returned value always lies in the
    // requested interval.
    double trunc_normal(double mean, double sd, double lo, double hi) {
        double a = (lo - mean) / sd;
        double b = (hi - mean) / sd;
        double z;
        if (a > 0.0) {
            z = -trunc_std_lower(-b, -a);
        } else {
            z = trunc_std_lower(a, b);
        }
        z = std::clamp(z, a, b);
        return mean + sd * z;
    }

    double trunc_normal_below(double mean, double sd, double hi) {
        return trunc_normal(mean, sd, -std::numeric_limits<double>::infinity(), hi);
    }

    double trunc_normal_above(double mean, double sd, double lo) {
        return trunc_normal(mean, sd, lo, std::numeric_limits<double>::infinity());
    }

    std::mt19937_64& engine() { return engine_; }

private:
    // Standard normal truncated to [a, b] with a <= 0, so that the CDF
    // values stay well away from the 1.0 rounding boundary.
    double trunc_std_lower(double a, double b) {
        const double fa = std::isinf(a) ? 0.0 : norm_cdf(a);
        const double fb = std::isinf(b) ? 1.0 : norm_cdf(b);
        if (!(fb > fa)) {
            // Interval mass below double resolution: fall back to the
            // nearer endpoint.
            return std::isinf(a) ? b : a;
        }
        double u = fa + (fb - fa) * uniform();
        if (u >= 1.0) u = std::nextafter(1.0, 0.0);
        return norm_quantile_raw(u);
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace indicate
