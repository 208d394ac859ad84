#include "borndev/deviation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace borndev::deviation {

namespace {

double require_positive(double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v))
        throw InvalidParameter(std::string(what) + " must be finite and > 0");
    return v;
}

}  // namespace

void ModelParams::validate() const {
    if (!(alpha >= 0) || !std::isfinite(alpha))
        throw InvalidParameter("ModelParams: alpha must be finite and >= 0");
}

DeviationReport analyze(const WaveFunction& psi, const Interval& interval,
                        const ModelParams& params, const Tolerance& tol) {
    params.validate();
    interval.validate();

    DeviationReport r;
    r.c3 = psi.abs4_total(tol);
    if (psi.support_within(interval)) {
        // The density vanishes outside I, so c1 = 1 and c2 = c3 identically.
        r.c1 = 1.0;
        r.c2 = r.c3;
        r.delta = 0.0;
        r.p_first_order = 1.0;
        r.p_exact = 1.0;
    } else {
        r.c1 = psi.abs2_integral(interval, tol);
        r.c2 = psi.abs4_integral(interval, tol);
        r.delta = params.alpha == 0.0 ? 0.0 : params.alpha * (r.c2 - r.c1 * r.c3);
        double p = r.c1 + r.delta;
        const double slack = 10.0 * tol.abs_tol;
        if (p < -slack || p > 1.0 + slack) r.first_order_out_of_range = true;
        if (p < 0.0 || p > 1.0) {
            p = std::clamp(p, 0.0, 1.0);
            r.clamped = true;
        }
        r.p_first_order = p;
        r.p_exact = std::clamp((r.c1 + params.alpha * r.c2) / (1.0 + params.alpha * r.c3),
                               0.0, 1.0);
    }
    r.validity_warning = params.alpha * r.c3 > 0.1;
    return r;
}

double delta_first_order(const WaveFunction& psi, const Interval& interval,
                         const ModelParams& params, const Tolerance& tol) {
    return analyze(psi, interval, params, tol).delta;
}

double generalized_probability_first_order(const WaveFunction& psi, const Interval& interval,
                                           const ModelParams& params, const Tolerance& tol) {
    const DeviationReport r = analyze(psi, interval, params, tol);
    if (r.first_order_out_of_range)
        throw OutOfRange("first-order probability left [0,1]: alpha too large");
    return r.p_first_order;
}

double exact_generalized_probability(const WaveFunction& psi, const Interval& interval,
                                     const ModelParams& params, const Tolerance& tol) {
    return analyze(psi, interval, params, tol).p_exact;
}

double step_delta_closed_form(double height, double ratio, double alpha) {
    require_positive(height, "step_delta_closed_form: height");
    require_positive(ratio, "step_delta_closed_form: ratio");
    ModelParams{alpha}.validate();
    const double k2 = ratio * ratio;
    const double den = (1.0 + k2) * (1.0 + k2);
    return alpha * height * height * k2 * (1.0 - k2) / den;
}

double gaussian_delta_closed_form(double length, double dispersion, double alpha) {
    require_positive(length, "gaussian_delta_closed_form: length");
    require_positive(dispersion, "gaussian_delta_closed_form: dispersion");
    ModelParams{alpha}.validate();
    const double sb = std::sqrt(dispersion);
    const double hi = numerics::erf(length / (2.0 * sb));
    const double lo = numerics::erf(length / (2.0 * std::sqrt(2.0) * sb));
    return alpha / (2.0 * std::sqrt(std::numbers::pi * dispersion)) * (hi - lo);
}

double gaussian_optimal_length(double dispersion) {
    require_positive(dispersion, "gaussian_optimal_length: dispersion");
    return 2.0 * std::sqrt(dispersion * std::numbers::ln2);
}

double gamma_constant() {
    static const double gamma = [] {
        const double hi = numerics::erf(std::sqrt(std::numbers::ln2));
        const double lo = numerics::erf(std::sqrt(0.5 * std::numbers::ln2));
        return 0.5 / std::sqrt(std::numbers::pi) * (hi - lo);
    }();
    return gamma;
}

GaussianOptimum gaussian_max_delta(double dispersion, double alpha) {
    require_positive(dispersion, "gaussian_max_delta: dispersion");
    ModelParams{alpha}.validate();
    const double g = gamma_constant();
    return {gaussian_optimal_length(dispersion), g * alpha / std::sqrt(dispersion), g};
}

DispersionDesign required_dispersion(int alpha_exponent, int target_exponent) {
    if (alpha_exponent <= 0)
        throw InvalidParameter("required_dispersion: alpha exponent m must be > 0");
    if (target_exponent < 0)
        throw InvalidParameter("required_dispersion: target exponent s must be >= 0");
    if (target_exponent > alpha_exponent)
        throw InvalidParameter(
            "required_dispersion: target exponent s must not exceed alpha exponent m");
    const int exponent = -2 * alpha_exponent + 2 * target_exponent;
    const double magnitude = std::pow(10.0, exponent);
    const double g = gamma_constant();
    return {g * g * magnitude, magnitude, exponent};
}

namespace {

// |c2 - c1*c3| with alpha factored out; keeps the search well scaled for any alpha.
double unit_objective(const WaveFunction& psi, const Interval& interval, double c3,
                      const Tolerance& tol) {
    const double c1 = psi.abs2_integral(interval, tol);
    const double c2 = psi.abs4_integral(interval, tol);
    return std::fabs(c2 - c1 * c3);
}

}  // namespace

OptimizeResult optimize_interval(const WaveFunction& psi, const ModelParams& params,
                                 OptimizeMode mode, const Tolerance& tol) {
    params.validate();
    const Interval box = psi.effective_support();
    const double c3 = psi.abs4_total(tol);

    if (params.alpha == 0.0) return {box, 0.0, true};

    OptimizeResult best{box, 0.0, false};
    double best_obj = -1.0;

    if (mode == OptimizeMode::kLengthSymmetric) {
        const double span = 2.0 * std::max(std::fabs(box.lo), std::fabs(box.hi));
        const int n = 256;
        int best_i = 1;
        for (int i = 1; i <= n; ++i) {
            const double len = span * i / n;
            const double obj = unit_objective(psi, {-0.5 * len, 0.5 * len}, c3, tol);
            if (obj > best_obj) {
                best_obj = obj;
                best_i = i;
            }
        }
        const double lo = span * std::max(1, best_i - 1) / n;
        const double hi = span * std::min(n, best_i + 1) / n;
        double len = 0.5 * (lo + hi);
        if (lo < hi) {
            auto [lmax, obj] = numerics::golden_section_max(
                [&](double l) { return unit_objective(psi, {-0.5 * l, 0.5 * l}, c3, tol); },
                {lo, hi}, {1e-10 * span, 0.0, tol.max_subdivisions});
            if (obj > best_obj) {
                len = lmax;
                best_obj = obj;
            } else {
                len = span * best_i / n;
            }
        }
        best.interval = {-0.5 * len, 0.5 * len};
    } else {
        const int n = 64;
        const double w = box.hi - box.lo;
        double blo = box.lo, bhi = box.hi;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j <= n; ++j) {
                const double lo = box.lo + w * i / n;
                const double hi = box.lo + w * j / n;
                const double obj = unit_objective(psi, {lo, hi}, c3, tol);
                if (obj > best_obj) {
                    best_obj = obj;
                    blo = lo;
                    bhi = hi;
                }
            }
        }
        // Coordinate-wise refinement around the best grid cell.
        const double h = w / n;
        for (int round = 0; round < 3; ++round) {
            const double la = std::max(box.lo, blo - h), lb = std::min(bhi - 1e-12 * w, blo + h);
            if (la < lb) {
                auto [lo_ref, obj] = numerics::golden_section_max(
                    [&](double lo) { return unit_objective(psi, {lo, bhi}, c3, tol); },
                    {la, lb}, {1e-10 * w, 0.0, tol.max_subdivisions});
                if (obj >= best_obj) {
                    best_obj = obj;
                    blo = lo_ref;
                }
            }
            const double ha = std::max(blo + 1e-12 * w, bhi - h), hb = std::min(box.hi, bhi + h);
            if (ha < hb) {
                auto [hi_ref, obj] = numerics::golden_section_max(
                    [&](double hi) { return unit_objective(psi, {blo, hi}, c3, tol); },
                    {ha, hb}, {1e-10 * w, 0.0, tol.max_subdivisions});
                if (obj >= best_obj) {
                    best_obj = obj;
                    bhi = hi_ref;
                }
            }
        }
        best.interval = {blo, bhi};
    }

    best.delta = delta_first_order(psi, best.interval, params, tol);
    if (best_obj <= 1e-14) best.degenerate = true;
    return best;
}

std::vector<ScanRow> scan_delta(const WaveFunction& psi, const ModelParams& params,
                                const std::vector<double>& lengths, const Tolerance& tol) {
    params.validate();
    std::vector<ScanRow> rows;
    rows.reserve(lengths.size());
    for (double len : lengths) {
        require_positive(len, "scan_delta: length");
        const DeviationReport r = analyze(psi, {-0.5 * len, 0.5 * len}, params, tol);
        rows.push_back({len, r.c1, r.delta, r.p_first_order, r.p_exact});
    }
    return rows;
}

}  // namespace borndev::deviation
