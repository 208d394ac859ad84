#include "borndev/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace borndev::experiment {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

double trial_uniform(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t state = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    const std::uint64_t bits = mix64(mix64(state));
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

Sampler::Sampler(const WaveFunction& psi, double alpha, int grid_points) {
    if (grid_points < 256) throw InvalidParameter("Sampler: grid_points must be >= 256");
    deviation::ModelParams{alpha}.validate();

    const Interval support = psi.effective_support();
    const double width = support.hi - support.lo;
    if (!(width > 0) || !std::isfinite(width))
        throw DegenerateSupport("Sampler: effective support has zero width");

    lo_ = support.lo;
    step_ = width / (grid_points - 1);

    std::vector<double> density(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        const double d = psi.density(lo_ + step_ * i);
        density[i] = d + alpha * d * d;
    }

    cdf_.resize(grid_points);
    cdf_[0] = 0.0;
    for (int i = 1; i < grid_points; ++i)
        cdf_[i] = cdf_[i - 1] + 0.5 * step_ * (density[i - 1] + density[i]);
    const double total = cdf_.back();
    if (!(total > 0)) throw DegenerateSupport("Sampler: density vanishes on the support");
    for (double& c : cdf_) c /= total;
    cdf_.back() = 1.0;
}

double Sampler::quantile(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const size_t i = std::min<size_t>(it - cdf_.begin(), cdf_.size() - 1);
    const double c0 = cdf_[i - 1], c1 = cdf_[i];
    const double frac = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
    return lo_ + step_ * (static_cast<double>(i - 1) + frac);
}

double Sampler::draw(std::uint64_t seed, std::uint64_t trial_index) const {
    return quantile(trial_uniform(seed, trial_index));
}

void ExperimentPlan::validate() const {
    interval.validate();
    deviation::ModelParams{alpha}.validate();
    if (n_trials < 1) throw InvalidParameter("ExperimentPlan: n_trials must be >= 1");
}

void PowerRequest::validate() const {
    if (!(p_born > 0) || !(p_born < 1))
        throw InvalidParameter("PowerRequest: p_born must lie in (0,1)");
    if (delta == 0.0 || !std::isfinite(delta))
        throw InvalidParameter("PowerRequest: delta must be nonzero and finite");
    const double p1 = p_born + delta;
    if (!(p1 > 0) || !(p1 < 1))
        throw InvalidParameter("PowerRequest: p_born + delta must lie in (0,1)");
    if (!(significance > 0) || !(significance < 1))
        throw InvalidParameter("PowerRequest: significance must lie in (0,1)");
    if (!(power > 0) || !(power < 1))
        throw InvalidParameter("PowerRequest: power must lie in (0,1)");
}

double normal_quantile(double p) {
    if (!(p > 0) || !(p < 1))
        throw InvalidParameter("normal_quantile: p must lie in (0,1)");
    auto cdf = [](double x) { return 0.5 * numerics::erfc(-x / std::numbers::sqrt2); };
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * (1.0 + std::fabs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double binomial_two_sided_p(std::int64_t hits, std::int64_t n, double p0) {
    if (n < 1 || hits < 0 || hits > n)
        throw InvalidParameter("binomial_two_sided_p: requires 0 <= hits <= n, n >= 1");
    if (!(p0 >= 0) || !(p0 <= 1))
        throw InvalidParameter("binomial_two_sided_p: p0 must lie in [0,1]");
    if (p0 == 0.0) return hits == 0 ? 1.0 : 0.0;
    if (p0 == 1.0) return hits == n ? 1.0 : 0.0;

    if (n <= 1000) {
        // Sum probabilities of all outcomes no more likely than the observed one.
        const double lp = std::log(p0), lq = std::log1p(-p0);
        const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
        auto logpmf = [&](std::int64_t k) {
            return lgn - std::lgamma(static_cast<double>(k) + 1.0) -
                   std::lgamma(static_cast<double>(n - k) + 1.0) + k * lp + (n - k) * lq;
        };
        const double cutoff = logpmf(hits) + 1e-7;
        double sum = 0.0;
        for (std::int64_t k = 0; k <= n; ++k)
            if (logpmf(k) <= cutoff) sum += std::exp(logpmf(k));
        return std::min(1.0, sum);
    }

    const double mean = n * p0;
    const double sd = std::sqrt(n * p0 * (1.0 - p0));
    const double z = std::max(0.0, (std::fabs(hits - mean) - 0.5) / sd);
    return std::clamp(numerics::erfc(z / std::numbers::sqrt2), 0.0, 1.0);
}

TrialOutcome run_experiment(const ExperimentPlan& plan, const Tolerance& tol) {
    plan.validate();
    const Sampler sampler(plan.psi, plan.alpha);
    const deviation::DeviationReport report =
        deviation::analyze(plan.psi, plan.interval, {plan.alpha}, tol);

    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < plan.n_trials; ++i)
        if (plan.interval.contains(sampler.draw(plan.seed, static_cast<std::uint64_t>(i))))
            ++hits;

    TrialOutcome out;
    out.hits = hits;
    out.n = plan.n_trials;
    out.empirical_p = static_cast<double>(hits) / static_cast<double>(plan.n_trials);
    out.p_value_born = binomial_two_sided_p(hits, plan.n_trials, report.c1);
    out.p_value_generalized = binomial_two_sided_p(hits, plan.n_trials, report.p_exact);
    const double q = report.c1 * (1.0 - report.c1);
    out.z_born = q > 0 ? (out.empirical_p - report.c1) / std::sqrt(q / plan.n_trials) : 0.0;
    return out;
}

std::int64_t required_sample_size(const PowerRequest& request) {
    request.validate();
    const double p0 = request.p_born, q0 = 1.0 - p0;
    const double p1 = p0 + request.delta, q1 = 1.0 - p1;
    const double za = normal_quantile(1.0 - 0.5 * request.significance);
    const double zb = normal_quantile(request.power);
    const double num = za * std::sqrt(p0 * q0) + zb * std::sqrt(p1 * q1);
    return static_cast<std::int64_t>(std::ceil(num * num / (request.delta * request.delta)));
}

}  // namespace borndev::experiment
