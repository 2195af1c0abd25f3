#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace nledge {

// Counter-based random stream: output i is the SplitMix64 finalizer applied to
// seed + (i+1) * golden-gamma. Draws are pure functions of (seed, counter), so
// any draw order and any parallel schedule produce identical values.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t at(std::uint64_t counter) const {
        std::uint64_t z = seed_ + (counter + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on the open interval (0,1); never returns 0 or 1.
    double uniform01(std::uint64_t counter) const {
        return (static_cast<double>(at(counter) >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    // Standard normal via the inverse CDF (Acklam's rational approximation,
    // relative error < 1.2e-9). Pure arithmetic in the central region; tails
    // use sqrt/log.
    double normal(std::uint64_t counter) const { return inverse_normal_cdf(uniform01(counter)); }

    static double inverse_normal_cdf(double u);

private:
    std::uint64_t seed_;
};

// Derives a child stream seed from (parent seed, tag). Chain calls to derive
// from tuples: derive(derive(seed, cell), replication).
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) {
    return CounterRng(parent).at(tag);
}

// Unbiased-enough bounded draw via 128-bit multiply-high; bias < 2^-40 for the
// ranges used here.
inline std::uint64_t bounded(std::uint64_t x, std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * n) >> 64);
}

// Fisher-Yates shuffle of 0..n-1 driven by the given stream.
inline std::vector<int> random_permutation(int n, const CounterRng& rng) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::uint64_t ctr = 0;
    for (int i = n - 1; i > 0; --i) {
        int j = static_cast<int>(bounded(rng.at(ctr++), static_cast<std::uint64_t>(i) + 1));
        std::swap(p[i], p[j]);
    }
    return p;
}

inline double CounterRng::inverse_normal_cdf(double u) {
    // Coefficients from Acklam's algorithm.
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    constexpr double p_high = 1.0 - p_low;

    if (u < p_low) {
        double q = std::sqrt(-2.0 * std::log(u));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (u > p_high) {
        double q = std::sqrt(-2.0 * std::log(1.0 - u));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = u - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace nledge
