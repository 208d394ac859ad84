#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "borndev/errors.hpp"
#include "borndev/numerics.hpp"

namespace borndev::states {

using numerics::Tolerance;

inline constexpr double kNormTol = 1e-9;

// Detection region: a segment of the real line, endpoints may be +-infinity.
// Treated as closed at finite endpoints.
struct Interval {
    double lo;
    double hi;

    static Interval real_line();
    void validate() const;
    bool finite() const;
    bool contains(double x) const;
};

// Constant amplitude H on [-L/2, L/2], L = 1/H^2 so the state is normalized.
struct SymmetricUniform {
    double height;
    double length;
};

// Amplitude H on [-L/2, 0], kH on (0, L/2], L = 2/(H^2 (k^2+1)).
// The discontinuity at x = 0 belongs to the left piece.
struct AsymmetricStep {
    double height;
    double ratio;
    double length;
};

// |Psi(x)|^2 = exp(-x^2/2b)/sqrt(2 pi b); the wavenumber only sets a phase
// and never enters any density integral.
struct GaussianState {
    double dispersion;
    double wavenumber;
};

// Piecewise-linear density |Psi|^2 on a strictly increasing grid, normalized
// at construction so the trapezoid integral is exactly 1.
struct Tabulated {
    std::vector<double> grid;
    std::vector<double> density;
};

class WaveFunction {
public:
    using Repr = std::variant<SymmetricUniform, AsymmetricStep, GaussianState, Tabulated>;

    static WaveFunction symmetric_uniform(double height);
    static WaveFunction asymmetric_step(double height, double ratio);
    static WaveFunction gaussian(double dispersion, double wavenumber = 0.0);
    static WaveFunction tabulated(std::vector<double> grid,
                                  std::vector<std::complex<double>> amplitudes);
    static WaveFunction tabulated_from_file(const std::string& path);

    // |Psi(x)|^2
    double density(double x) const;

    // c1 = integral of |Psi|^2 over I. Closed forms for the analytic variants,
    // exact piecewise algebra for the interpolated density.
    double abs2_integral(const Interval& interval, const Tolerance& tol = {}) const;

    // c2 = integral of |Psi|^4 over I.
    double abs4_integral(const Interval& interval, const Tolerance& tol = {}) const;

    // c3 = integral of |Psi|^4 over the whole line.
    double abs4_total(const Tolerance& tol = {}) const;

    // Region outside which the density is numerically negligible
    // (exact support for the compactly supported variants, |x| <= 10 sqrt(b)
    // for the Gaussian).
    Interval effective_support() const;

    // True when the density vanishes identically outside the interval.
    bool support_within(const Interval& interval) const;

    const Repr& repr() const { return repr_; }

private:
    explicit WaveFunction(Repr repr) : repr_(std::move(repr)) {}
    Repr repr_;
};

}  // namespace borndev::states
