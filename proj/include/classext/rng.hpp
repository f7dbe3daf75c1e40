#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace classext {

// Deterministic RNG stream derived from a master seed and a counter.
// Parallel tasks get disjoint streams by counter, so serial and parallel
// schedules produce identical draws. Uniform and normal variates are built
// from raw engine output rather than std distributions, which keeps runs
// reproducible across standard-library versions.
class RngStream {
public:
    explicit RngStream(std::uint64_t master_seed, std::uint64_t counter = 0)
        : base_(master_seed), counter_(counter) {
        std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                          static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
                          0x9e3779b9u};
        engine_.seed(seq);
    }

    // Stream for sub-task `counter`, disjoint from streams derived under any
    // other counter path from the same master seed.
    RngStream derive(std::uint64_t counter) const { return RngStream(base_, mix(counter_, counter)); }

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ull;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebull;
        x ^= x >> 31;
        return x;
    }

    std::uint64_t u64() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform_open() {  // (0, 1)
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        return u;
    }

    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform_open();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    std::complex<double> complex_normal() { return {normal(), normal()}; }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(uniform() * (hi - lo + 1));
    }

    // Uniform sample from the probability simplex (flat Dirichlet), via
    // normalized exponentials.
    std::vector<double> simplex(int n) {
        std::vector<double> w(n);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            w[i] = -std::log(uniform_open());
            sum += w[i];
        }
        for (auto& x : w) x /= sum;
        return w;
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t base_ = 0;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace classext
