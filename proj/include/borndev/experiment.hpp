#pragma once

#include <cstdint>
#include <vector>

#include "borndev/deviation.hpp"
#include "borndev/states.hpp"

namespace borndev::experiment {

using numerics::Tolerance;
using states::Interval;
using states::WaveFunction;

// Inverse-CDF sampler for the normalized detection density
// p_alpha(x) proportional to |Psi|^2 + alpha |Psi|^4, tabulated on a uniform
// grid over the effective support. Deterministic given (psi, alpha, grid_points);
// immutable after construction.
class Sampler {
public:
    static constexpr int kDefaultGridPoints = 65536;

    Sampler(const WaveFunction& psi, double alpha, int grid_points = kDefaultGridPoints);

    // Inverse CDF with linear interpolation inside a grid cell, u in [0,1).
    double quantile(double u) const;

    // Position draw for one trial; the stream is derived from (seed, trial_index)
    // so serial and partitioned runs produce identical sequences.
    double draw(std::uint64_t seed, std::uint64_t trial_index) const;

private:
    double lo_, step_;
    std::vector<double> cdf_;
};

struct ExperimentPlan {
    WaveFunction psi;
    Interval interval;
    double alpha = 0.0;
    std::int64_t n_trials = 1;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TrialOutcome {
    std::int64_t hits = 0;
    std::int64_t n = 0;
    double empirical_p = 0.0;
    double p_value_born = 1.0;         // two-sided test against the Born probability
    double p_value_generalized = 1.0;  // two-sided test against the generalized probability
    double z_born = 0.0;
};

struct PowerRequest {
    double p_born;
    double delta;
    double significance;
    double power;

    void validate() const;
};

// Counter-based per-trial random stream: one uniform in [0,1) from (seed, index).
double trial_uniform(std::uint64_t seed, std::uint64_t index);

// Two-sided binomial p-value for `hits` successes in `n` trials under success
// probability p0: exact (summing outcomes no more likely than the observed one)
// for n <= 1000, normal approximation with continuity correction above.
double binomial_two_sided_p(std::int64_t hits, std::int64_t n, double p0);

// Quantile of the standard normal distribution, by bisection on erfc.
double normal_quantile(double p);

// Draws plan.n_trials positions from the generalized detection density, counts
// hits in plan.interval (closed endpoints) and tests against both the Born and
// the generalized-Born null. Reproducible from the seed alone.
TrialOutcome run_experiment(const ExperimentPlan& plan, const Tolerance& tol = {});

// Smallest N whose two-proportion normal-approximation power reaches the request
// for detecting p_born + delta against p_born.
std::int64_t required_sample_size(const PowerRequest& request);

}  // namespace borndev::experiment
