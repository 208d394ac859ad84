#pragma once

#include <functional>
#include <utility>

#include "borndev/errors.hpp"

namespace borndev::numerics {

struct Tolerance {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;

    void validate() const;
};

struct Bracket {
    double lo;
    double hi;

    void validate() const;
};

// Adaptive Gauss-Kronrod (G7/K15) quadrature with interval bisection.
// Infinite endpoints are mapped to a finite domain via x = t/(1-t^2)
// (shifted for half-infinite ranges), which keeps Gaussian-type tails smooth.
// The returned estimate carries an error bound <= max(abs_tol, rel_tol*|result|).
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const Tolerance& tol = {});

// erf to 1e-12 absolute accuracy: power series for |x| <= 3, complementary
// continued fraction beyond. Odd symmetry is exact by construction.
double erf(double x);
double erfc(double x);

// Golden-section search for the maximum of a unimodal f on [bracket.lo, bracket.hi].
// Unimodality is the caller's responsibility; iteration cap 200.
std::pair<double, double> golden_section_max(const std::function<double(double)>& f,
                                             Bracket bracket, const Tolerance& tol = {});

}  // namespace borndev::numerics
