#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace crch {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic sampler. mt19937_64 output is fixed by the standard and
// all variates below are derived with explicit formulas, so streams are
// reproducible across platforms and toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // inclusive on both ends
    int uniform_int(int lo, int hi) {
        const double u = uniform();
        int v = lo + static_cast<int>(u * (static_cast<double>(hi) - lo + 1.0));
        return v > hi ? hi : v;
    }

    // inverse CDF
    double weibull(double shape, double scale) {
        const double u = uniform();
        return scale * std::pow(-std::log1p(-u), 1.0 / shape);
    }

    // Box-Muller without the cached spare, so the stream position is
    // a pure function of the draw count.
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
    }

    double lognormal(double mu, double sigma) { return std::exp(mu + sigma * normal()); }

private:
    std::mt19937_64 gen_;
};

}  // namespace crch
