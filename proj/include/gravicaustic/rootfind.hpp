#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "gravicaustic/error.hpp"

namespace gravicaustic {

inline constexpr double kDefaultTolX = 1e-12;
inline constexpr double kDefaultTolF = 1e-12;
inline constexpr int kDefaultMaxIter = 200;

// Sign-change enclosure: f_lo * f_hi <= 0.
struct Bracket {
    double lo;
    double hi;
    double f_lo;
    double f_hi;

    bool valid() const { return lo <= hi && f_lo * f_hi <= 0.0; }
    double width() const { return hi - lo; }
};

// Bracket-safe root polishing: secant/false-position step when it lands
// inside the bracket, bisection otherwise. Never leaves [lo, hi].
template <typename F>
double refine_root(F&& g, Bracket b, double tol_x = kDefaultTolX,
                   double tol_f = kDefaultTolF, int max_iter = kDefaultMaxIter) {
    if (!b.valid())
        throw Error("refine_root: invalid bracket");
    if (b.f_lo == 0.0) return b.lo;
    if (b.f_hi == 0.0) return b.hi;

    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(b.f_lo) <= tol_f) return b.lo;
        if (std::abs(b.f_hi) <= tol_f) return b.hi;
        if (b.width() <= tol_x) return 0.5 * (b.lo + b.hi);

        const double mid = 0.5 * (b.lo + b.hi);
        double x = mid;
        const double df = b.f_hi - b.f_lo;
        if (df != 0.0) {
            const double secant = b.lo - b.f_lo * b.width() / df;
            if (secant > b.lo && secant < b.hi) x = secant;
        }
        // Keep a minimum shrink so a stalled secant endpoint cannot pin
        // the iteration.
        const double margin = 0.01 * b.width();
        x = std::clamp(x, b.lo + margin, b.hi - margin);

        const double fx = g(x);
        if (fx == 0.0) return x;
        if ((fx < 0.0) == (b.f_lo < 0.0)) {
            b.lo = x;
            b.f_lo = fx;
        } else {
            b.hi = x;
            b.f_hi = fx;
        }
    }
    throw ConvergenceError("refine_root: no convergence after max_iter", b.lo, b.hi);
}

// Walks g forward from `start` and returns the earliest sign-change
// bracket within (start, start + max_span], or nullopt. Near-zero
// samples without a sign change trigger step halving down to
// initial_step / 2^10 (grazing guard).
template <typename F>
std::optional<Bracket> scan_first_bracket(F&& g, double start, double initial_step,
                                          double max_span,
                                          double grazing_tol = kDefaultTolF) {
    const double end = start + max_span;
    const double step_floor = initial_step / 1024.0;
    double step = initial_step;
    double t0 = start;
    double g0 = g(t0);
    if (g0 == 0.0) {
        // Root exactly at the start: nudge past it.
        t0 = std::min(start + step_floor, end);
        g0 = g(t0);
    }
    while (t0 < end) {
        const double t1 = std::min(t0 + step, end);
        const double g1 = g(t1);
        if (g0 * g1 <= 0.0)
            return Bracket{t0, t1, g0, g1};
        if (std::abs(g1) < grazing_tol && step > step_floor) {
            step = std::max(0.5 * step, step_floor);
            continue; // re-sample the shrunken interval from t0
        }
        t0 = t1;
        g0 = g1;
        if (std::abs(g1) >= grazing_tol && step < initial_step)
            step = std::min(2.0 * step, initial_step);
    }
    return std::nullopt;
}

// Golden-section minimum of g on [lo, hi]; local minimum for multimodal g.
template <typename F>
std::pair<double, double> minimize_1d(F&& g, double lo, double hi,
                                      double tol = 1e-10) {
    if (!(lo < hi))
        throw Error("minimize_1d: requires lo < hi");
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double gc = g(c), gd = g(d);
    // Stop at tol or at the interval's floating-point resolution,
    // whichever is coarser; ~200 iterations shrink any interval to ulp.
    int iter = 0;
    while (b - a > tol + 4.0 * std::numeric_limits<double>::epsilon() *
                             (std::abs(a) + std::abs(b)) &&
           ++iter < 200) {
        if (gc < gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - invphi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + invphi * (b - a);
            gd = g(d);
        }
    }
    // Endpoints of the original interval can be the true minimum.
    double xm = 0.5 * (a + b), gm = g(xm);
    const double glo = g(lo), ghi = g(hi);
    if (glo < gm) { xm = lo; gm = glo; }
    if (ghi < gm) { xm = hi; gm = ghi; }
    return {xm, gm};
}

} // namespace gravicaustic
