#include "borndev/states.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace borndev::states {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double overlap(double lo, double hi, const Interval& interval) {
    const double a = std::max(lo, interval.lo);
    const double b = std::min(hi, interval.hi);
    return std::max(0.0, b - a);
}

// integral of a linear density between (a, da) and (b, db)
double lin_integral(double a, double b, double da, double db) {
    return (b - a) * 0.5 * (da + db);
}

// integral of the square of a linear density between (a, da) and (b, db)
double lin_sq_integral(double a, double b, double da, double db) {
    return (b - a) * (da * da + da * db + db * db) / 3.0;
}

}  // namespace

Interval Interval::real_line() { return {-kInf, kInf}; }

void Interval::validate() const {
    if (std::isnan(lo) || std::isnan(hi))
        throw InvalidParameter("Interval: endpoints must not be NaN");
    if (!(lo < hi)) throw InvalidParameter("Interval: requires lo < hi");
}

bool Interval::finite() const { return std::isfinite(lo) && std::isfinite(hi); }

bool Interval::contains(double x) const { return x >= lo && x <= hi; }

WaveFunction WaveFunction::symmetric_uniform(double height) {
    if (!(height > 0) || !std::isfinite(height))
        throw InvalidParameter("symmetric_uniform: height must be > 0");
    return WaveFunction(SymmetricUniform{height, 1.0 / (height * height)});
}

WaveFunction WaveFunction::asymmetric_step(double height, double ratio) {
    if (!(height > 0) || !std::isfinite(height))
        throw InvalidParameter("asymmetric_step: height must be > 0");
    if (!(ratio > 0) || !std::isfinite(ratio))
        throw InvalidParameter("asymmetric_step: ratio must be > 0");
    const double length = 2.0 / (height * height * (ratio * ratio + 1.0));
    return WaveFunction(AsymmetricStep{height, ratio, length});
}

WaveFunction WaveFunction::gaussian(double dispersion, double wavenumber) {
    if (!(dispersion > 0) || !std::isfinite(dispersion))
        throw InvalidParameter("gaussian: dispersion must be > 0");
    if (!std::isfinite(wavenumber))
        throw InvalidParameter("gaussian: wavenumber must be finite");
    return WaveFunction(GaussianState{dispersion, wavenumber});
}

WaveFunction WaveFunction::tabulated(std::vector<double> grid,
                                     std::vector<std::complex<double>> amplitudes) {
    if (grid.size() < 2) throw InvalidParameter("tabulated: grid needs >= 2 points");
    if (grid.size() != amplitudes.size())
        throw InvalidParameter("tabulated: grid and amplitude sizes differ");
    for (size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]))
            throw InvalidParameter("tabulated: grid points must be finite");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw InvalidParameter("tabulated: grid must be strictly increasing");
        if (!std::isfinite(amplitudes[i].real()) || !std::isfinite(amplitudes[i].imag()))
            throw InvalidParameter("tabulated: amplitudes must be finite");
    }
    std::vector<double> density(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) density[i] = std::norm(amplitudes[i]);

    double norm = 0.0;
    for (size_t i = 1; i < grid.size(); ++i)
        norm += lin_integral(grid[i - 1], grid[i], density[i - 1], density[i]);
    if (!(norm > 0)) throw ZeroNorm("tabulated: state has zero norm");
    for (double& d : density) d /= norm;
    return WaveFunction(Tabulated{std::move(grid), std::move(density)});
}

WaveFunction WaveFunction::tabulated_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("tabulated_from_file: cannot open " + path);
    std::vector<double> grid;
    std::vector<std::complex<double>> amps;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream row(line);
        double x, re, im = 0.0;
        if (!(row >> x)) continue;  // blank line
        if (!(row >> re))
            throw InvalidParameter("tabulated_from_file: line " + std::to_string(lineno) +
                                   ": expected `x re [im]`");
        row >> im;
        std::string extra;
        if (row >> extra)
            throw InvalidParameter("tabulated_from_file: line " + std::to_string(lineno) +
                                   ": trailing tokens");
        if (!grid.empty() && !(x > grid.back()))
            throw InvalidParameter("tabulated_from_file: line " + std::to_string(lineno) +
                                   ": x values must be strictly increasing");
        grid.push_back(x);
        amps.emplace_back(re, im);
    }
    return tabulated(std::move(grid), std::move(amps));
}

double WaveFunction::density(double x) const {
    return std::visit(
        [x](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SymmetricUniform>) {
                const double half = 0.5 * s.length;
                return (x >= -half && x <= half) ? s.height * s.height : 0.0;
            } else if constexpr (std::is_same_v<T, AsymmetricStep>) {
                const double half = 0.5 * s.length;
                if (x < -half || x > half) return 0.0;
                const double h = (x <= 0.0) ? s.height : s.ratio * s.height;
                return h * h;
            } else if constexpr (std::is_same_v<T, GaussianState>) {
                const double b = s.dispersion;
                return std::exp(-x * x / (2.0 * b)) / std::sqrt(2.0 * std::numbers::pi * b);
            } else {
                const auto& g = s.grid;
                if (x < g.front() || x > g.back()) return 0.0;
                auto it = std::upper_bound(g.begin(), g.end(), x);
                size_t i = std::min<size_t>(it - g.begin(), g.size() - 1);
                const double x0 = g[i - 1], x1 = g[i];
                const double t = (x - x0) / (x1 - x0);
                return (1.0 - t) * s.density[i - 1] + t * s.density[i];
            }
        },
        repr_);
}

namespace {

// Shared piecewise algebra for both step variants: sum of power-p densities
// over the overlap of each constant piece with the interval.
double step_integral(const AsymmetricStep& s, const Interval& interval, int power) {
    const double half = 0.5 * s.length;
    const double dl = std::pow(s.height * s.height, power);
    const double dr = std::pow(s.ratio * s.ratio * s.height * s.height, power);
    return dl * overlap(-half, 0.0, interval) + dr * overlap(0.0, half, interval);
}

// 0.5 * [erf(hi/s) - erf(lo/s)]; with s = sqrt(2b) this is the Gaussian c1,
// with s = sqrt(b) and the 1/(2 sqrt(pi b)) prefactor applied it is c2.
double erf_difference(const Interval& interval, double s) {
    const double lo = numerics::erf(interval.lo / s);
    const double hi = numerics::erf(interval.hi / s);
    return 0.5 * (hi - lo);
}

double tabulated_integral(const Tabulated& t, const Interval& interval, bool squared) {
    const auto& g = t.grid;
    const auto& d = t.density;
    double sum = 0.0;
    for (size_t i = 1; i < g.size(); ++i) {
        const double a = std::max(g[i - 1], interval.lo);
        const double b = std::min(g[i], interval.hi);
        if (b <= a) continue;
        const double w = g[i] - g[i - 1];
        const double da = d[i - 1] + (d[i] - d[i - 1]) * (a - g[i - 1]) / w;
        const double db = d[i - 1] + (d[i] - d[i - 1]) * (b - g[i - 1]) / w;
        sum += squared ? lin_sq_integral(a, b, da, db) : lin_integral(a, b, da, db);
    }
    return sum;
}

}  // namespace

double WaveFunction::abs2_integral(const Interval& interval, const Tolerance&) const {
    interval.validate();
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SymmetricUniform>) {
                const double half = 0.5 * s.length;
                return s.height * s.height * overlap(-half, half, interval);
            } else if constexpr (std::is_same_v<T, AsymmetricStep>) {
                return step_integral(s, interval, 1);
            } else if constexpr (std::is_same_v<T, GaussianState>) {
                return erf_difference(interval, std::sqrt(2.0 * s.dispersion));
            } else {
                return tabulated_integral(s, interval, false);
            }
        },
        repr_);
}

double WaveFunction::abs4_integral(const Interval& interval, const Tolerance&) const {
    interval.validate();
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SymmetricUniform>) {
                const double half = 0.5 * s.length;
                const double h2 = s.height * s.height;
                return h2 * h2 * overlap(-half, half, interval);
            } else if constexpr (std::is_same_v<T, AsymmetricStep>) {
                return step_integral(s, interval, 2);
            } else if constexpr (std::is_same_v<T, GaussianState>) {
                const double b = s.dispersion;
                return erf_difference(interval, std::sqrt(b)) /
                       (2.0 * std::sqrt(std::numbers::pi * b));
            } else {
                return tabulated_integral(s, interval, true);
            }
        },
        repr_);
}

double WaveFunction::abs4_total(const Tolerance& tol) const {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SymmetricUniform>) {
                return s.height * s.height;
            } else if constexpr (std::is_same_v<T, AsymmetricStep>) {
                const double k2 = s.ratio * s.ratio;
                return (1.0 + k2 * k2) / (1.0 + k2) * s.height * s.height;
            } else if constexpr (std::is_same_v<T, GaussianState>) {
                return 1.0 / (2.0 * std::sqrt(std::numbers::pi * s.dispersion));
            } else {
                return abs4_integral(Interval::real_line(), tol);
            }
        },
        repr_);
}

Interval WaveFunction::effective_support() const {
    return std::visit(
        [](const auto& s) -> Interval {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SymmetricUniform> ||
                          std::is_same_v<T, AsymmetricStep>) {
                return {-0.5 * s.length, 0.5 * s.length};
            } else if constexpr (std::is_same_v<T, GaussianState>) {
                const double r = 10.0 * std::sqrt(s.dispersion);
                return {-r, r};
            } else {
                return {s.grid.front(), s.grid.back()};
            }
        },
        repr_);
}

bool WaveFunction::support_within(const Interval& interval) const {
    if (std::holds_alternative<GaussianState>(repr_))
        return std::isinf(interval.lo) && std::isinf(interval.hi);
    const Interval supp = effective_support();
    return interval.lo <= supp.lo && interval.hi >= supp.hi;
}

}  // namespace borndev::states
