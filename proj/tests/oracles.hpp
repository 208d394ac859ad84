// Independent reference implementations used only by tests. Nothing here may
// call into the library paths it is checking.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>

namespace oracle {

// erf by its alternating Taylor series, summed to machine precision.
inline double erf_taylor(double x) {
    double term = x, sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x * x / n;
        const double contrib = term / (2 * n + 1);
        sum += contrib;
        if (std::fabs(contrib) < 1e-18 * std::fabs(sum)) break;
    }
    return 2.0 / std::sqrt(std::numbers::pi) * sum;
}

inline double trapezoid(const std::function<double(double)>& f, double a, double b,
                        long n) {
    const double h = (b - a) / n;
    double sum = 0.5 * (f(a) + f(b));
    for (long i = 1; i < n; ++i) sum += f(a + h * i);
    return sum * h;
}

// Deterministic generator for property tests (xorshift64*).
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed ? seed : 0x2545F4914F6CDD1DULL) {}

    std::uint64_t next() {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        return state * 0x2545F4914F6CDD1DULL;
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

}  // namespace oracle
