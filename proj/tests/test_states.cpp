#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <numbers>

#include <doctest.h>

#include "borndev/numerics.hpp"
#include "borndev/states.hpp"
#include "oracles.hpp"

using namespace borndev;
using states::Interval;
using states::WaveFunction;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const Interval kLine = Interval::real_line();

// Pure-quadrature reference for the closed-form integral paths. The step
// variants have a known jump at x = 0, so the range is integrated piecewise
// around it; each piece is then smooth.
double quad_integral(const WaveFunction& psi, const Interval& interval, int power) {
    const Interval supp = psi.effective_support();
    const double lo = std::max(interval.lo, supp.lo);
    const double hi = std::min(interval.hi, supp.hi);
    if (hi <= lo) return 0.0;
    auto f = [&](double x) {
        const double d = psi.density(x);
        return power == 1 ? d : d * d;
    };
    const numerics::Tolerance tol{1e-13, 1e-11, 5000};
    if (lo < 0.0 && 0.0 < hi)
        return numerics::integrate(f, lo, 0.0, tol) + numerics::integrate(f, 0.0, hi, tol);
    return numerics::integrate(f, lo, hi, tol);
}

}  // namespace

TEST_CASE("symmetric uniform: support and normalization") {
    const auto psi = WaveFunction::symmetric_uniform(1.0);
    CHECK(psi.density(0.0) == 1.0);
    CHECK(psi.density(0.49) == 1.0);
    CHECK(psi.density(0.51) == 0.0);
    CHECK(psi.abs2_integral(kLine) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(psi.abs4_total() == 1.0);

    const auto tall = WaveFunction::symmetric_uniform(2.0);
    CHECK(tall.density(0.2) == 0.0);  // outside [-1/8, 1/8]
    CHECK(tall.density(-0.2) == 0.0);
    CHECK(tall.abs4_total() == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("asymmetric step: paper half-support integrals") {
    const auto psi = WaveFunction::asymmetric_step(1.0, 2.0);
    const double len = 2.0 / 5.0;
    const Interval left{-0.5 * len, 0.0};
    CHECK(psi.abs2_integral(left) == doctest::Approx(1.0 / 5.0).epsilon(1e-14));
    CHECK(psi.abs4_integral(left) == doctest::Approx(1.0 / 5.0).epsilon(1e-14));
    CHECK(psi.abs4_total() == doctest::Approx(17.0 / 5.0).epsilon(1e-14));
    CHECK(psi.density(0.1) == 4.0);  // inside (0, L/2]
    CHECK(psi.density(0.0) == 1.0);  // discontinuity belongs to the left piece
    CHECK(psi.abs2_integral(kLine) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gaussian: density and closed-form integrals") {
    const auto psi = WaveFunction::gaussian(1.0, 5.0);
    CHECK(psi.density(0.0) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));
    CHECK(psi.abs2_integral(kLine) == 1.0);
    CHECK(psi.abs2_integral({-1.0, 1.0}) ==
          doctest::Approx(0.6826894921370859).epsilon(1e-12));
    CHECK(WaveFunction::gaussian(4.0).abs4_total() ==
          doctest::Approx(1.0 / (4.0 * std::sqrt(std::numbers::pi))).epsilon(1e-13));
    CHECK(WaveFunction::gaussian(4.0).abs4_total() ==
          doctest::Approx(0.14104739588693909).epsilon(1e-12));
}

TEST_CASE("gaussian: phase invariance is exact") {
    const auto a = WaveFunction::gaussian(0.7, 0.0);
    const auto b = WaveFunction::gaussian(0.7, 13.5);
    for (double x : {-2.0, -0.3, 0.0, 1.1})
        CHECK(a.density(x) == b.density(x));
    const Interval window{-0.4, 0.9};
    CHECK(a.abs2_integral(window) == b.abs2_integral(window));
    CHECK(a.abs4_integral(window) == b.abs4_integral(window));
    CHECK(a.abs4_total() == b.abs4_total());
}

TEST_CASE("tabulated: construction normalizes the trapezoid integral") {
    const auto psi = WaveFunction::tabulated({0.0, 1.0, 2.0},
                                             {{0.0, 0.0}, {2.0, 0.0}, {0.0, 0.0}});
    CHECK(psi.abs2_integral(kLine) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(psi.density(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(psi.density(0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(psi.density(-0.1) == 0.0);
    CHECK(psi.density(2.1) == 0.0);
    // integral of the squared triangle density: 2 * (1/3)
    CHECK(psi.abs4_total() == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("tabulated: rejects degenerate input") {
    CHECK_THROWS_AS(WaveFunction::tabulated({0.0}, {{1.0, 0.0}}), InvalidParameter);
    CHECK_THROWS_AS(WaveFunction::tabulated({0.0, 0.0}, {{1.0, 0.0}, {1.0, 0.0}}),
                    InvalidParameter);
    CHECK_THROWS_AS(WaveFunction::tabulated({0.0, 1.0}, {{0.0, 0.0}, {0.0, 0.0}}), ZeroNorm);
    CHECK_THROWS_AS(WaveFunction::tabulated({0.0, 1.0}, {{1.0, 0.0}}), InvalidParameter);
}

TEST_CASE("constructor parameter validation") {
    CHECK_THROWS_AS(WaveFunction::symmetric_uniform(0.0), InvalidParameter);
    CHECK_THROWS_AS(WaveFunction::symmetric_uniform(-1.0), InvalidParameter);
    CHECK_THROWS_AS(WaveFunction::asymmetric_step(1.0, 0.0), InvalidParameter);
    CHECK_THROWS_AS(WaveFunction::gaussian(0.0), InvalidParameter);
    CHECK_THROWS_AS(WaveFunction::gaussian(1.0, kInf), InvalidParameter);
}

TEST_CASE("tabulated file format") {
    const std::string path = std::string(BORNDEV_TEST_DATA_DIR) + "/state.dat";
    {
        std::ofstream f(path);
        f << "# x  re  im\n";
        f << "-1.0  0.0\n";
        f << " 0.0  1.0  1.0   # complex amplitude\n";
        f << " 1.0  0.5\n";
        f << "\n";
    }
    const auto psi = WaveFunction::tabulated_from_file(path);
    CHECK(psi.abs2_integral(kLine) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(psi.effective_support().lo == -1.0);
    CHECK(psi.effective_support().hi == 1.0);

    {
        std::ofstream f(path);
        f << "0.0 1.0\n-1.0 1.0\n";  // not increasing
    }
    CHECK_THROWS_AS(WaveFunction::tabulated_from_file(path), InvalidParameter);
    {
        std::ofstream f(path);
        f << "0.0 1.0 0.0 junk\n";
    }
    CHECK_THROWS_AS(WaveFunction::tabulated_from_file(path), InvalidParameter);
    CHECK_THROWS_AS(WaveFunction::tabulated_from_file("/nonexistent/state.dat"),
                    InvalidParameter);
}

TEST_CASE("normalization holds for randomized tabulated states") {
    oracle::Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 40);
        std::vector<double> grid;
        std::vector<std::complex<double>> amps;
        double x = rng.range(-5.0, 0.0);
        for (int i = 0; i < n; ++i) {
            grid.push_back(x);
            x += rng.range(0.01, 1.0);
            amps.emplace_back(rng.range(-2.0, 2.0), rng.range(-2.0, 2.0));
        }
        const auto psi = WaveFunction::tabulated(grid, amps);
        CHECK(std::fabs(psi.abs2_integral(kLine) - 1.0) < 1e-9);
    }
}

TEST_CASE("closed forms agree with pure quadrature on random cases") {
    oracle::Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        WaveFunction psi = [&]() {
            switch (trial % 3) {
                case 0:
                    return WaveFunction::symmetric_uniform(rng.range(0.3, 3.0));
                case 1:
                    return WaveFunction::asymmetric_step(rng.range(0.3, 3.0),
                                                         rng.range(0.2, 4.0));
                default:
                    return WaveFunction::gaussian(rng.range(0.05, 4.0));
            }
        }();
        const Interval supp = psi.effective_support();
        const double a = rng.range(supp.lo, supp.hi);
        const double b = rng.range(a + 1e-3, supp.hi + 1.0);
        const Interval window{a, b};
        CHECK(std::fabs(psi.abs2_integral(window) - quad_integral(psi, window, 1)) < 1e-9);
        CHECK(std::fabs(psi.abs4_integral(window) - quad_integral(psi, window, 2)) < 1e-9);
    }
}

TEST_CASE("abs2_integral is monotone under interval growth") {
    const auto psi = WaveFunction::gaussian(0.5);
    double prev = 0.0;
    for (double r = 0.1; r <= 4.0; r += 0.1) {
        const double p = psi.abs2_integral({-r, r});
        CHECK(p >= prev);
        prev = p;
    }
    CHECK(prev <= 1.0 + states::kNormTol);
}

TEST_CASE("interval validation") {
    CHECK_THROWS_AS((Interval{1.0, 1.0}.validate()), InvalidParameter);
    CHECK_THROWS_AS((Interval{2.0, -2.0}.validate()), InvalidParameter);
    CHECK_THROWS_AS((Interval{kInf, kInf}.validate()), InvalidParameter);
    CHECK_NOTHROW((Interval{-kInf, kInf}.validate()));
    CHECK_NOTHROW((Interval{0.0, kInf}.validate()));
    CHECK(Interval{0.0, 1.0}.contains(1.0));  // closed endpoints
    CHECK(!Interval{0.0, 1.0}.contains(1.0000001));
}
