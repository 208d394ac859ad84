#pragma once

#include <vector>

#include "borndev/states.hpp"

namespace borndev::deviation {

using numerics::Tolerance;
using states::Interval;
using states::WaveFunction;

// alpha is the dispersion of the detection-nonlinearity fluctuations, the
// small parameter scaling the fourth-order correction.
struct ModelParams {
    double alpha = 0.0;

    void validate() const;
};

struct DeviationReport {
    double c1 = 0.0;         // Born probability over I
    double c2 = 0.0;         // fourth-moment integral over I
    double c3 = 0.0;         // fourth-moment integral over the line
    double delta = 0.0;      // alpha * (c2 - c1*c3)
    double p_first_order = 0.0;
    double p_exact = 0.0;    // (c1 + alpha*c2) / (1 + alpha*c3)
    bool validity_warning = false;  // alpha*c3 > 0.1: first-order regime questionable
    bool clamped = false;           // p_first_order clamped into [0,1]
    // c1 + delta left [0,1] by more than 10*abs_tol; the first-order model broke down
    bool first_order_out_of_range = false;
};

struct GaussianOptimum {
    double length_max;  // interval length maximizing the deviation
    double delta_max;   // gamma * alpha / sqrt(b)
    double gamma;
};

struct DispersionDesign {
    double dispersion_exact;      // gamma^2 * 10^(-2m+2s)
    double dispersion_magnitude;  // the bare order-of-magnitude 10^(-2m+2s)
    int exponent;                 // -2m + 2s
};

enum class OptimizeMode { kLengthSymmetric, kFreeEndpoints };

struct OptimizeResult {
    Interval interval;
    double delta;
    bool degenerate = false;  // alpha = 0 or no interval produces a deviation
};

struct ScanRow {
    double length;
    double c1;
    double delta;
    double p_first_order;
    double p_exact;
};

// Full per-interval analysis: c1, c2, c3, first-order deviation and both
// probability rules in one pass.
DeviationReport analyze(const WaveFunction& psi, const Interval& interval,
                        const ModelParams& params, const Tolerance& tol = {});

// First-order deviation alpha*(c2 - c1*c3).
double delta_first_order(const WaveFunction& psi, const Interval& interval,
                         const ModelParams& params, const Tolerance& tol = {});

// c1 + delta, clamped into [0,1]; throws OutOfRange when the result leaves
// [0,1] by more than 10*abs_tol (alpha too large for the first-order model).
double generalized_probability_first_order(const WaveFunction& psi, const Interval& interval,
                                           const ModelParams& params,
                                           const Tolerance& tol = {});

// The normalized fourth-order detection measure (c1 + alpha*c2)/(1 + alpha*c3);
// an exact probability measure that matches the first-order rule to O(alpha^2).
double exact_generalized_probability(const WaveFunction& psi, const Interval& interval,
                                     const ModelParams& params, const Tolerance& tol = {});

// Deviation for the asymmetric step with I = left half-support:
// alpha * H^2 k^2 (1-k^2) / (1+k^2)^2. Positive for k < 1, negative for k > 1.
double step_delta_closed_form(double height, double ratio, double alpha);

// Deviation for the Gaussian state on the symmetric interval of length L:
// (alpha / pi b) * integral of exp(-x^2/b) over [L/(2 sqrt 2), L/2], via erf.
double gaussian_delta_closed_form(double length, double dispersion, double alpha);

// Interval length maximizing the Gaussian deviation: 2 sqrt(b ln 2).
double gaussian_optimal_length(double dispersion);

// gamma = (1/pi) * integral of exp(-x^2) over [sqrt(ln2/2), sqrt(ln2)],
// evaluated through erf and cached.
double gamma_constant();

GaussianOptimum gaussian_max_delta(double dispersion, double alpha);

// Dispersion needed so that a deviation of magnitude 10^(-s) is reachable
// with alpha = 10^(-m): exact solve b = gamma^2 * 10^(-2m+2s), reported next
// to the bare order of magnitude.
DispersionDesign required_dispersion(int alpha_exponent, int target_exponent);

// Searches for the interval maximizing |delta|: coarse grid scan followed by
// golden-section refinement. Unimodality is not assumed; the grid picks the basin.
OptimizeResult optimize_interval(const WaveFunction& psi, const ModelParams& params,
                                 OptimizeMode mode, const Tolerance& tol = {});

// Deviation curve over symmetric intervals [-L/2, L/2], one row per length.
std::vector<ScanRow> scan_delta(const WaveFunction& psi, const ModelParams& params,
                                const std::vector<double>& lengths,
                                const Tolerance& tol = {});

}  // namespace borndev::deviation
