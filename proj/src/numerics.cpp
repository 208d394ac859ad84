#include "borndev/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace borndev::numerics {

void Tolerance::validate() const {
    if (abs_tol < 0 || rel_tol < 0)
        throw InvalidParameter("Tolerance: abs_tol and rel_tol must be >= 0");
    if (abs_tol == 0 && rel_tol == 0)
        throw InvalidParameter("Tolerance: abs_tol and rel_tol must not both be zero");
    if (max_subdivisions <= 0)
        throw InvalidParameter("Tolerance: max_subdivisions must be > 0");
}

void Bracket::validate() const {
    if (!(lo < hi)) throw InvalidParameter("Bracket: requires lo < hi");
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw InvalidParameter("Bracket: endpoints must be finite");
}

namespace {

// 15-point Kronrod nodes on [0,1] with Kronrod and embedded Gauss-7 weights.
struct Node {
    double x, wk, wg;
};
constexpr Node kG7K15[8] = {
    {0.000000000000000, 0.209482141084728, 0.417959183673469},
    {0.405845151377397, 0.190350578064785, 0.381830050505119},
    {0.741531185599394, 0.140653259715525, 0.279705391489277},
    {0.949107912342759, 0.063092092629979, 0.129484966168870},
    {0.207784955007898, 0.204432940075298, 0.0},
    {0.586087235467691, 0.169004726639267, 0.0},
    {0.864864423359769, 0.104790010322250, 0.0},
    {0.991455371120813, 0.022935322010529, 0.0},
};

template <class F>
double kronrod15(const F& f, double a, double b, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double y0 = f(mid);
    double k15 = kG7K15[0].wk * y0;
    double g7 = kG7K15[0].wg * y0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kG7K15[i].x;
        const double yi = f(mid + dx) + f(mid - dx);
        k15 += kG7K15[i].wk * yi;
        g7 += kG7K15[i].wg * yi;
    }
    k15 *= half;
    g7 *= half;

    if (!std::isfinite(k15))
        throw NonFinite("integrate: integrand produced a non-finite value");

    // Quadpack-style sharpened estimate, floored at the raw difference.
    const double diff = std::fabs(k15 - g7);
    err = std::max(diff, std::pow(200.0 * diff, 1.5));
    return k15;
}

struct Piece {
    double a, b, value, err;
    bool operator<(const Piece& o) const { return err < o.err; }
};

// One piece estimate: K15 on both halves, with the whole-interval K15 as a
// cross-check. The split difference catches integrands (e.g. jumps) that fool
// the embedded Gauss/Kronrod comparison.
template <class F>
Piece evaluate_piece(const F& f, double a, double b) {
    double ew;
    const double vw = kronrod15(f, a, b, ew);
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) return {a, b, vw, 0.0};  // machine precision floor
    double el, er;
    const double v = kronrod15(f, a, m, el) + kronrod15(f, m, b, er);
    return {a, b, v, std::max(el + er, std::fabs(vw - v))};
}

// Globally adaptive bisection on a finite range.
double integrate_finite(const std::function<double(double)>& f, double a, double b,
                        const Tolerance& tol) {
    std::priority_queue<Piece> heap;
    Piece root = evaluate_piece(f, a, b);
    double sum = root.value, sum_err = root.err;
    heap.push(root);

    for (int splits = 0; splits < tol.max_subdivisions; ++splits) {
        if (sum_err <= std::max(tol.abs_tol, tol.rel_tol * std::fabs(sum))) return sum;
        const Piece p = heap.top();
        heap.pop();
        const double m = 0.5 * (p.a + p.b);
        if (m <= p.a || m >= p.b) continue;  // exhausted; keep its estimate
        const Piece left = evaluate_piece(f, p.a, m);
        const Piece right = evaluate_piece(f, m, p.b);
        sum += left.value + right.value - p.value;
        sum_err += left.err + right.err - p.err;
        heap.push(left);
        heap.push(right);
    }
    if (sum_err <= std::max(tol.abs_tol, tol.rel_tol * std::fabs(sum))) return sum;
    throw NonConvergence("integrate: subdivision limit reached before tolerance");
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const Tolerance& tol) {
    tol.validate();
    if (!(lo < hi)) {
        if (lo == hi) return 0.0;
        throw InvalidParameter("integrate: requires lo < hi");
    }

    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);
    if (!lo_inf && !hi_inf) return integrate_finite(f, lo, hi, tol);

    // Map an infinite tail through u(t) = t/(1-t^2), u'(t) = (1+t^2)/(1-t^2)^2.
    auto u = [](double t) { return t / (1.0 - t * t); };
    auto du = [](double t) {
        const double s = 1.0 - t * t;
        return (1.0 + t * t) / (s * s);
    };
    auto guarded = [&f](double x) {
        const double v = f(x);
        if (!std::isfinite(v))
            throw NonFinite("integrate: integrand produced a non-finite value");
        return v;
    };

    if (lo_inf && hi_inf) {
        auto g = [&](double t) { return guarded(u(t)) * du(t); };
        return integrate_finite(g, -1.0, 1.0, tol);
    }
    if (hi_inf) {
        auto g = [&](double t) { return guarded(lo + u(t)) * du(t); };
        return integrate_finite(g, 0.0, 1.0, tol);
    }
    auto g = [&](double t) { return guarded(hi - u(t)) * du(t); };
    return integrate_finite(g, 0.0, 1.0, tol);
}

namespace {

constexpr double kInvSqrtPi = 0.5641895835477562869;  // 1/sqrt(pi)

// erf(x) = (2x e^{-x^2}/sqrt(pi)) * sum (2x^2)^n / (2n+1)!!, all terms positive.
double erf_series(double x) {
    const double x2 = x * x;
    double term = 1.0, sum = 1.0;
    for (int n = 1; n < 200; ++n) {
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return 2.0 * kInvSqrtPi * x * std::exp(-x2) * sum;
}

// erfc(x) = e^{-x^2}/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), x >= 3.
double erfc_cf(double x) {
    const double tiny = 1e-300;
    double fv = x, c = x, d = 0.0;
    for (int n = 1; n < 300; ++n) {
        const double an = 0.5 * n;
        d = x + an * d;
        if (d == 0.0) d = tiny;
        c = x + an / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        fv *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return kInvSqrtPi * std::exp(-x * x) / fv;
}

}  // namespace

double erf(double x) {
    if (std::isnan(x)) return x;
    const double ax = std::fabs(x);
    double r;
    if (ax <= 3.0)
        r = erf_series(ax);
    else if (ax < 27.0)
        r = 1.0 - erfc_cf(ax);
    else
        r = 1.0;
    return std::signbit(x) ? -r : r;
}

double erfc(double x) {
    if (x >= 3.0) return x < 27.0 ? erfc_cf(x) : 0.0;
    return 1.0 - erf(x);
}

std::pair<double, double> golden_section_max(const std::function<double(double)>& f,
                                             Bracket bracket, const Tolerance& tol) {
    bracket.validate();
    tol.validate();
    constexpr double invphi = 0.6180339887498948482;
    constexpr int kMaxIter = 200;

    double a = bracket.lo, b = bracket.hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    const double xtol = std::max(tol.abs_tol,
                                 tol.rel_tol * 0.5 * (std::fabs(a) + std::fabs(b)));

    for (int it = 0; it < kMaxIter; ++it) {
        if (b - a <= xtol) break;
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    if (b - a > xtol && b - a > 1e-40 * std::max(1.0, std::fabs(a) + std::fabs(b)))
        throw NonConvergence("golden_section_max: iteration cap reached");
    const double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

}  // namespace borndev::numerics
