#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace gibbs {

// Deterministic splittable random stream. The generator is SplitMix64,
// chosen because its output is fully specified by integer arithmetic and
// therefore identical across platforms and standard libraries. All variate
// generation below is hand-rolled for the same reason: std::*_distribution
// is implementation-defined.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform01() < p;
    }

    // Unbiased uniform index in {0, ..., n-1} by rejection on the top range.
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_index: empty range");
        std::uint64_t threshold = (-n) % n;  // 2^64 mod n
        for (;;) {
            std::uint64_t x = next_u64();
            if (x >= threshold) return x % n;
        }
    }

    // Poisson count by multiplying uniforms until the product drops below
    // exp(-mean), accumulated in log space so large means stay stable.
    // Means here are bounded by lambda * |domain| which is small at the
    // scales this engine targets.
    std::uint64_t poisson(double mean) {
        if (mean < 0.0) throw std::invalid_argument("poisson: negative mean");
        if (mean == 0.0) return 0;
        double log_acc = 0.0;
        std::uint64_t k = 0;
        for (;;) {
            double u = uniform01();
            while (u <= 0.0) u = uniform01();
            log_acc += std::log(u);
            if (log_acc < -mean) return k;
            ++k;
        }
    }

    // Derived stream for run fan-out: hash-mix the base seed with an index.
    static RngStream derive(std::uint64_t base_seed, std::uint64_t index) {
        std::uint64_t z = base_seed ^ (0x632be59bd9b4e019ULL * (index + 1));
        z = (z ^ (z >> 29)) * 0xff51afd7ed558ccdULL;
        z = (z ^ (z >> 32)) * 0xc4ceb9fe1a85ec53ULL;
        return RngStream(z ^ (z >> 29));
    }

private:
    std::uint64_t state_;
};

}  // namespace gibbs
