#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "gravicaustic/dual.hpp"
#include "gravicaustic/error.hpp"
#include "gravicaustic/mirror.hpp"
#include "gravicaustic/rootfind.hpp"
#include "gravicaustic/vec2.hpp"

namespace gravicaustic {

// Foci curve of a mirror for caustic parameter L: the envelope of the
// circle family of radius L - f(k) centered on the boundary. All flight
// parabola foci of one orbit lie on the member matched to the initial
// focus.
struct FociCurve {
    const Mirror* mirror;
    double L;
};

// Foci curve plus directrix height H; yields the two trajectory envelopes.
struct EnvelopePair {
    FociCurve foci;
    double H;
};

struct SampledCurve {
    std::vector<std::pair<double, Vec2>> points; // (k, point), monotone in k
    std::vector<double> singularities;           // excluded k values
};

// Point of the circle-family domain: center (k, f(k)), radius L - f(k),
// angle theta.
inline Vec2 domain_point(const Mirror& m, double L, double k, double theta) {
    const double f = m.height(k);
    const double r = L - f;
    return {k + r * std::cos(theta), f + r * std::sin(theta)};
}

// Nontrivial solution angle of the envelope condition; depends on the
// mirror slope only.
inline double theta_star(const Mirror& m, double k) {
    const double fp = m.slope(k);
    return std::atan2(fp * fp - 1.0, 2.0 * fp);
}

inline Vec2 foci_curve_point(const FociCurve& c, double k) {
    const double f = c.mirror->height(k);
    const double fp = c.mirror->slope(k);
    const double w = 1.0 + fp * fp;
    return {k + (c.L - f) * 2.0 * fp / w,
            f + (c.L - f) * (fp * fp - 1.0) / w};
}

// (x_F'(k), y_F'(k)) via dual arithmetic through the curve formula;
// needs f''.
inline Vec2 foci_tangent(const FociCurve& c, double k) {
    const MirrorDerivs d = c.mirror->derivs2(k);
    const Dual1 kd = Dual1::variable(k);
    const Dual1 f{d.f, d.fp};
    const Dual1 fp{d.fp, d.fpp};
    const Dual1 w = 1.0 + fp * fp;
    const Dual1 xF = kd + (c.L - f) * 2.0 * fp / w;
    const Dual1 yF = f + (c.L - f) * (fp * fp - 1.0) / w;
    return {xF.deriv, yF.deriv};
}

struct JPair {
    double plus;
    double minus;
};

namespace detail {

// (x + r)(x - r) = -y^2 rewrites whichever branch loses digits to
// cancellation.
inline JPair stable_J(double x, double y) {
    const double r = std::hypot(x, y);
    if (x >= 0.0)
        return {(x + r) / y, -y / (x + r)};
    return {-y / (x - r), (x - r) / y};
}

} // namespace detail

// J± = (x_F' ± sqrt(x_F'^2 + y_F'^2)) / y_F'; J+ J- = -1.
inline JPair J_pm(const FociCurve& c, double k) {
    const Vec2 t = foci_tangent(c, k);
    if (t.y == 0.0)
        throw Error("J_pm: flat foci tangent (y_F'(k)=0); use the degenerate "
                    "envelope branch (vertex) instead");
    return detail::stable_J(t.x, t.y);
}

enum class Branch { Plus, Minus };

// Envelope point of the flight-parabola family for directrix H. At a flat
// foci tangent only the t->0 branch survives (the parabola vertex); the
// other branch throws.
inline Vec2 envelope_point(const EnvelopePair& e, double k, Branch branch) {
    const Vec2 F = foci_curve_point(e.foci, k);
    if (e.H < F.y)
        throw Error("envelope_point: H below the foci curve at this k");
    const Vec2 t = foci_tangent(e.foci, k);
    if (t.y == 0.0) {
        // Degenerate: J_sign(x_F') has a finite zero limit on one branch.
        const bool defined = (branch == Branch::Plus) ? (t.x < 0.0) : (t.x > 0.0);
        if (!defined || t.x == 0.0)
            throw Error("envelope_point: branch undefined at flat foci tangent");
        return {F.x, 0.5 * (e.H + F.y)};
    }
    const JPair jp = detail::stable_J(t.x, t.y);
    const double J = (branch == Branch::Plus) ? jp.plus : jp.minus;
    return {F.x + (e.H - F.y) * J,
            0.5 * e.H * (1.0 - J * J) + 0.5 * F.y * (1.0 + J * J)};
}

struct MatchResult {
    double L;
    double k0;
    double residual;
};

struct MatchOptions {
    int grid_points = 2048;
    double span_factor = 10.0; // restrict |k| <= span_factor * (1 + |F0|)
    double tol = 1e-9;
};

namespace detail {

// Residual in k after eliminating L from the x-equation of the foci
// curve (needs f' != 0).
inline double match_residual_x(const Mirror& m, const Vec2& F0, double k) {
    const double f = m.height(k);
    const double fp = m.slope(k);
    return f + (F0.x - k) * (fp * fp - 1.0) / (2.0 * fp) - F0.y;
}

inline double match_L_from_x(const Mirror& m, const Vec2& F0, double k) {
    const double f = m.height(k);
    const double fp = m.slope(k);
    return f + (F0.x - k) * (1.0 + fp * fp) / (2.0 * fp);
}

// Residual after eliminating L from the y-equation instead (needs
// f'^2 != 1); covers the f'=0 gaps of the x-route.
inline double match_residual_y(const Mirror& m, const Vec2& F0, double k) {
    const double f = m.height(k);
    const double fp = m.slope(k);
    return k + (F0.y - f) * 2.0 * fp / (fp * fp - 1.0) - F0.x;
}

inline double match_L_from_y(const Mirror& m, const Vec2& F0, double k) {
    const double f = m.height(k);
    const double fp = m.slope(k);
    return f + (F0.y - f) * (1.0 + fp * fp) / (fp * fp - 1.0);
}

template <typename Residual, typename Recover>
void match_scan(const Mirror& m, const Vec2& F0, double k_lo, double k_hi,
                int grid, Residual&& res, Recover&& recover,
                double tol, std::vector<MatchResult>& out) {
    const double dk = (k_hi - k_lo) / grid;
    double k_prev = k_lo;
    double r_prev = std::numeric_limits<double>::quiet_NaN();
    try {
        r_prev = res(k_prev);
    } catch (const Error&) {}
    for (int i = 1; i <= grid; ++i) {
        const double k = k_lo + i * dk;
        double r = std::numeric_limits<double>::quiet_NaN();
        try {
            r = res(k);
        } catch (const Error&) {}
        if (std::isfinite(r_prev) && std::isfinite(r) && r_prev * r <= 0.0) {
            try {
                const double k0 = refine_root(res, Bracket{k_prev, k, r_prev, r});
                const double L = recover(k0);
                const FociCurve c{&m, L};
                const double resid = distance(foci_curve_point(c, k0), F0);
                if (std::isfinite(L) && resid <= tol)
                    out.push_back({L, k0, resid});
            } catch (const Error&) {
                // ill-conditioned bracket (route singularity); other route
                // or neighbors cover it
            }
        }
        k_prev = k;
        r_prev = r;
    }
}

} // namespace detail

// Solves foci_curve_point(L, k) = F0 for (L, k). The curve coordinates
// are affine in L for fixed k, so L is eliminated and the remaining
// residual is root-solved in k over a bracket grid. Two elimination
// routes (x- and y-equation) cover each other's slope singularities.
inline std::vector<MatchResult> match_L_all(const Mirror& m, const Vec2& F0,
                                            const MatchOptions& opt = {}) {
    const double span = opt.span_factor * (1.0 + F0.norm());
    const double k_lo = std::max(m.x_min(), -span);
    const double k_hi = std::min(m.x_max(), span);
    std::vector<MatchResult> found;
    detail::match_scan(m, F0, k_lo, k_hi, opt.grid_points,
                       [&](double k) { return detail::match_residual_x(m, F0, k); },
                       [&](double k) { return detail::match_L_from_x(m, F0, k); },
                       opt.tol, found);
    detail::match_scan(m, F0, k_lo, k_hi, opt.grid_points,
                       [&](double k) { return detail::match_residual_y(m, F0, k); },
                       [&](double k) { return detail::match_L_from_y(m, F0, k); },
                       opt.tol, found);
    std::sort(found.begin(), found.end(),
              [](const MatchResult& a, const MatchResult& b) { return a.k0 < b.k0; });
    // Deduplicate solutions found by both routes.
    std::vector<MatchResult> unique;
    for (const MatchResult& s : found) {
        if (!unique.empty() && std::abs(s.k0 - unique.back().k0) < 1e-7 &&
            std::abs(s.L - unique.back().L) < 1e-7) {
            if (s.residual < unique.back().residual) unique.back() = s;
            continue;
        }
        unique.push_back(s);
    }
    return unique;
}

inline MatchResult match_L(const Mirror& m, const Vec2& F0,
                           const MatchOptions& opt = {}) {
    const auto all = match_L_all(m, F0, opt);
    if (all.empty())
        throw Error("match_L: focus not reachable on any foci curve of this mirror");
    return *std::min_element(all.begin(), all.end(),
                             [](const MatchResult& a, const MatchResult& b) {
                                 return a.residual < b.residual;
                             });
}

// --- sampling ---------------------------------------------------------

inline SampledCurve sample_foci(const FociCurve& c, double k_min, double k_max,
                                int count) {
    SampledCurve out;
    out.points.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double k = k_min + (k_max - k_min) * i / (count - 1);
        try {
            const Vec2 p = foci_curve_point(c, k);
            if (std::isfinite(p.x) && std::isfinite(p.y))
                out.points.emplace_back(k, p);
            else
                out.singularities.push_back(k);
        } catch (const Error&) {
            out.singularities.push_back(k);
        }
    }
    return out;
}

inline SampledCurve sample_envelope(const EnvelopePair& e, Branch branch,
                                    double k_min, double k_max, int count) {
    SampledCurve out;
    out.points.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double k = k_min + (k_max - k_min) * i / (count - 1);
        try {
            const Vec2 p = envelope_point(e, k, branch);
            if (std::isfinite(p.x) && std::isfinite(p.y))
                out.points.emplace_back(k, p);
            else
                out.singularities.push_back(k);
        } catch (const Error&) {
            out.singularities.push_back(k);
        }
    }
    return out;
}

// --- confinement ------------------------------------------------------

struct ConfinementOptions {
    int linear_samples = 1025; // k grid over the central window
    int log_samples = 257;     // per side, toward the k -> +-inf limits
    double k_max = 1e5;
    double tol = 1e-6;
};

// Point-membership test against the domain bounded by the mirror, the
// directrix, and the upper boundary of the flight-parabola family
//   y_k(x) = (H + y_F(k))/2 - (x - x_F(k))^2 / (2 (H - y_F(k))),
// whose envelope is the pair of Theorem-2 curves. A point is inside iff
// it lies below some family member; evaluating the family maximum
// directly (grid + golden-section polish in k) stays exact at tangency
// points and handles the branches' folds and asymptotic limits, where a
// sampled-polyline version of the envelope curves loses accuracy.
class ConfinedDomain {
public:
    ConfinedDomain(const EnvelopePair& e, double x_lo, double x_hi,
                   const ConfinementOptions& opt = {})
        : env_(e), tol_(opt.tol), x_lo_(x_lo), x_hi_(x_hi) {
        if (!(x_lo < x_hi))
            throw Error("ConfinedDomain: requires x_lo < x_hi");
        const double k0 =
            std::max(50.0, 5.0 * std::max(std::abs(x_lo), std::abs(x_hi)));
        ks_.reserve(opt.linear_samples + 2 * opt.log_samples);
        for (int i = 0; i < opt.linear_samples; ++i)
            ks_.push_back(-k0 + 2.0 * k0 * i / (opt.linear_samples - 1));
        const double ratio = std::log(opt.k_max / k0);
        for (int i = 1; i <= opt.log_samples; ++i) {
            ks_.push_back(k0 * std::exp(ratio * i / opt.log_samples));
            ks_.push_back(-k0 * std::exp(ratio * i / opt.log_samples));
        }
        std::sort(ks_.begin(), ks_.end());
    }

    // Signed outward violation: positive means outside by that much.
    double violation(const Vec2& p) const {
        if (p.x < x_lo_ || p.x > x_hi_)
            throw Error("point outside the sampled x window at x=" +
                        std::to_string(p.x));
        const Mirror& m = *env_.foci.mirror;
        double v = std::max(m.height(p.x) - tol_ - p.y, p.y - env_.H - tol_);
        return std::max(v, p.y - ceiling(p.x) - tol_);
    }

    bool contains(const Vec2& p) const { return violation(p) <= 0.0; }

    // Height of the highest family parabola at x.
    double ceiling(double x) const {
        auto member = [&](double k) { return member_height(k, x); };
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < ks_.size(); ++i) {
            const double y = member(ks_[i]);
            if (y > best) { best = y; best_i = i; }
        }
        if (!std::isfinite(best)) return best;
        const double lo = ks_[best_i == 0 ? 0 : best_i - 1];
        const double hi = ks_[std::min(best_i + 1, ks_.size() - 1)];
        const auto [km, neg] =
            minimize_1d([&](double k) { return -member(k); }, lo, hi, 1e-12);
        return std::max(best, -neg);
    }

private:
    double member_height(double k, double x) const {
        const Mirror& m = *env_.foci.mirror;
        if (!m.in_domain(k))
            return -std::numeric_limits<double>::infinity();
        const Vec2 F = foci_curve_point(env_.foci, k);
        const double depth = env_.H - F.y; // 2x the member's focal length
        if (!(depth > 0.0) || !std::isfinite(F.x))
            return -std::numeric_limits<double>::infinity();
        return 0.5 * (env_.H + F.y) - (x - F.x) * (x - F.x) / (2.0 * depth);
    }

    EnvelopePair env_;
    double tol_;
    double x_lo_;
    double x_hi_;
    std::vector<double> ks_;
};

// --- closed forms from the worked examples (test oracles) --------------

namespace closed_form {

// Parabolic mirror: foci curve is the circle of radius f_m + L centered
// at (0, f_m).
inline Vec2 parabolic_foci(double f_m, double L, double phi) {
    const double R = f_m + L;
    return {R * std::cos(phi), f_m + R * std::sin(phi)};
}

// Parabolic mirror envelopes: y = -x^2 / (2 (H - f_m ± R)) + (H + f_m ± R)/2.
inline double parabolic_envelope_y(double f_m, double L, double H, double x,
                                   Branch branch) {
    const double R = f_m + L;
    const double s = (branch == Branch::Plus) ? R : -R;
    return -x * x / (2.0 * (H - f_m + s)) + 0.5 * (H + f_m + s);
}

// Line mirror: foci line y = x tan(2a) - L sec(2a).
inline double line_foci_y(double alpha, double L, double x) {
    return x * std::tan(2.0 * alpha) - L / std::cos(2.0 * alpha);
}

// Line mirror envelopes through the initial focus (xF0, yF0): the plus
// branch has slope -cot(a), the minus branch slope tan(a).
inline double line_envelope_y(double alpha, const Vec2& F0, double H, double x,
                              Branch branch) {
    const double ta = std::tan(alpha);
    if (branch == Branch::Minus)
        return (x - F0.x) * ta + 0.5 * F0.y * (1.0 - ta * ta) +
               0.5 * H * (1.0 + ta * ta);
    const double it = 1.0 / ta;
    return -(x - F0.x) * it + 0.5 * F0.y * (1.0 - it * it) +
           0.5 * H * (1.0 + it * it);
}

// Hyperbolic mirror f(x) = sqrt(1 + x^2).
inline Vec2 hyperbolic_foci(double L, double k) {
    const double r = std::sqrt(1.0 + k * k);
    const double d = 1.0 + 2.0 * k * k;
    return {k * (2.0 * L * r - 1.0) / d, (2.0 * r * r * r - L) / d};
}

inline JPair hyperbolic_J(double L, double k) {
    const double k2 = k * k;
    const double r = std::sqrt(k2 + 1.0);
    const double rad = std::sqrt(
        (2.0 * k2 + 1.0) * (2.0 * k2 + 1.0) *
        (4.0 * L * (L + r * (2.0 * k2 - 1.0)) + 4.0 * k2 * k2 * k2 - 3.0 * k2 + 1.0) /
        (k2 + 1.0));
    const double den = 2.0 * k * (2.0 * L * r + 2.0 * k2 * k2 + k2 - 1.0);
    return {(r * (2.0 * k2 - 1.0 + rad) + 2.0 * L) / den,
            (r * (2.0 * k2 - 1.0 - rad) + 2.0 * L) / den};
}

} // namespace closed_form

} // namespace gravicaustic
