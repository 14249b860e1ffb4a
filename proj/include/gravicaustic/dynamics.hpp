#pragma once

#include <cassert>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gravicaustic/error.hpp"
#include "gravicaustic/mirror.hpp"
#include "gravicaustic/rootfind.hpp"
#include "gravicaustic/vec2.hpp"

namespace gravicaustic {

struct State {
    Vec2 pos;
    Vec2 vel;
};

// One gravity-only flight segment starting from `start`; g > 0 points down.
struct FlightParabola {
    State start;
    double g = 1.0;

    Vec2 position_at(double t) const {
        return {start.pos.x + start.vel.x * t,
                start.pos.y - 0.5 * g * t * t + start.vel.y * t};
    }

    Vec2 velocity_at(double t) const {
        return {start.vel.x, start.vel.y - g * t};
    }

    // f = v_x^2 / (2g); zero for a vertical (degenerate) flight.
    double focal_length() const { return start.vel.x * start.vel.x / (2.0 * g); }

    bool is_degenerate() const { return start.vel.x == 0.0; }

    // Focus translated from the launch point; for a degenerate flight this
    // is the apex (focal length 0).
    Vec2 focus() const {
        const double vx = start.vel.x, vy = start.vel.y;
        if (is_degenerate())
            return {start.pos.x, start.pos.y + vy * vy / (2.0 * g)};
        return {start.pos.x + vx * vy / g,
                start.pos.y + (vy * vy - vx * vx) / (2.0 * g)};
    }

    // Common directrix height H = y0 + |v|^2/(2g) = y_F + 2f.
    double directrix() const {
        return start.pos.y + start.vel.norm2() / (2.0 * g);
    }

    Vec2 vertex() const {
        const Vec2 F = focus();
        return {F.x, 0.5 * (directrix() + F.y)};
    }
};

struct Bounce {
    Vec2 impact;
    double t_flight; // flight time of the incoming segment
    Vec2 v_in;
    Vec2 v_out;
    double alpha;    // mirror tangent angle at the impact
    Vec2 focus_in;
    Vec2 focus_out;
    bool degenerate_in = false;
    bool degenerate_out = false;
};

enum class Termination { MaxBounces, Escaped, Stuck };

struct Trajectory {
    State initial;
    double g = 1.0;
    std::vector<Bounce> bounces;
    Termination termination = Termination::MaxBounces;
    std::string termination_detail;

    // Launch state of segment i (segment 0 is the initial state; segment
    // i>0 starts at bounce i-1).
    State segment_start(std::size_t i) const {
        if (i == 0) return initial;
        const Bounce& b = bounces[i - 1];
        return {b.impact, b.v_out};
    }
    std::size_t segment_count() const { return bounces.size() + 1; }
};

// Specular reflection v - 2 (v.n) n; requires an incident velocity.
inline Vec2 reflect(const Vec2& v_in, const Vec2& normal) {
    const double d = v_in.dot(normal);
    if (d >= 0.0)
        throw Error("reflect: non-incident impact (v.n >= 0)");
    return v_in - 2.0 * d * normal;
}

// Linear focus map at a reflection point: in coordinates centered at the
// impact, F' = [[-cos4a, -sin4a], [-sin4a, cos4a]] F. Involutive.
inline Vec2 reflect_focus(const Vec2& F_rel, double alpha) {
    const double c = std::cos(4.0 * alpha);
    const double s = std::sin(4.0 * alpha);
    return {-c * F_rel.x - s * F_rel.y, -s * F_rel.x + c * F_rel.y};
}

struct Impact {
    double t;
    Vec2 point;
};

struct ImpactOptions {
    double tol_x = kDefaultTolX;
    double tol_f = kDefaultTolF;
    // Multiples of the characteristic fall time sqrt(2 (H - f(x0)) / g).
    double horizon_factor = 1e3;
    // Scan step as a fraction of the characteristic time.
    double step_fraction = 1.0 / 1024.0;
};

namespace detail {

inline double characteristic_time(const FlightParabola& p, const Mirror& m) {
    const double drop = std::max(p.directrix() - m.height(p.start.pos.x), 1e-9);
    return std::sqrt(2.0 * drop / p.g);
}

} // namespace detail

// First t* > t_start with y(t*) = f(x(t*)), or nullopt when the particle
// leaves the mirror domain / exceeds the time horizon (escape).
inline std::optional<Impact> next_impact(const FlightParabola& p, const Mirror& m,
                                         double t_start = 0.0,
                                         const ImpactOptions& opt = {}) {
    double t_lift = t_start + 10.0 * opt.tol_x;
    const double t_char = detail::characteristic_time(p, m);
    double t_end = t_start + opt.horizon_factor * t_char;

    // Cap the scan at the moment x(t) exits the mirror domain.
    const double vx = p.start.vel.x;
    if (vx > 0.0) t_end = std::min(t_end, (m.x_max() - p.start.pos.x) / vx);
    if (vx < 0.0) t_end = std::min(t_end, (m.x_min() - p.start.pos.x) / vx);
    if (t_end <= t_lift)
        return std::nullopt;

    auto gap = [&](double t) { return p.position_at(t).y - m.height(p.position_at(t).x); };

    // A reflection far from the origin leaves the start point a few ulps off
    // the surface, which can swamp the fixed lift above. Raise the lift until
    // the gap clears the local rounding floor (and the refiner's f-tolerance)
    // so the scan starts firmly airborne; bail out for descending/grazing
    // starts and keep the plain lift.
    const double floor_gap =
        std::max(64.0 * std::numeric_limits<double>::epsilon() *
                     (1.0 + std::abs(p.start.pos.y)),
                 10.0 * opt.tol_f);
    if (gap(t_lift) <= floor_gap) {
        double lift = t_lift - t_start;
        bool cleared = false;
        for (int i = 0; i < 60 && lift < 0.125 * t_char; ++i) {
            lift *= 2.0;
            if (gap(t_start + lift) > floor_gap) {
                t_lift = t_start + lift;
                cleared = true;
                break;
            }
        }
        if (!cleared)
            t_lift = t_start + 10.0 * opt.tol_x;
    }

    const double step = opt.step_fraction * t_char;
    const auto bracket = scan_first_bracket(gap, t_lift, step, t_end - t_lift, opt.tol_f);
    if (!bracket)
        return std::nullopt;
    const double t_hit = refine_root(gap, *bracket, opt.tol_x, opt.tol_f);
    return Impact{t_hit, p.position_at(t_hit)};
}

struct SimulateOptions {
    ImpactOptions impact;
    // Grazing impacts (|v.n| below this) are skipped, not reflected.
    double grazing_tol = 1e-10;
    // Consecutive near-zero flight times before declaring the particle stuck.
    int max_corner_flights = 50;
};

// Iterates next_impact + reflect for up to n bounces.
inline Trajectory simulate(const State& initial, const Mirror& m, double g,
                           std::size_t n, const SimulateOptions& opt = {}) {
    Trajectory traj;
    traj.initial = initial;
    traj.g = g;
    if (initial.pos.y < m.height(initial.pos.x) - 1e-9)
        throw Error("simulate: initial position below the mirror");

    State state = initial;
    int corner_run = 0;
    while (traj.bounces.size() < n) {
        const FlightParabola seg{state, g};
        double t_from = 0.0;
        std::optional<Impact> hit;
        Vec2 v_in, normal;
        // Grazing impacts are skipped: continue the same segment past them.
        for (int graze = 0; graze < 16; ++graze) {
            hit = next_impact(seg, m, t_from, opt.impact);
            if (!hit) break;
            v_in = seg.velocity_at(hit->t);
            normal = m.unit_normal(hit->point.x);
            if (v_in.dot(normal) < -opt.grazing_tol) break;
            t_from = hit->t;
            hit.reset();
        }
        if (!hit) {
            traj.termination = Termination::Escaped;
            traj.termination_detail = "no further impact within domain/horizon";
            return traj;
        }

        if (hit->t <= 20.0 * opt.impact.tol_x)
            ++corner_run;
        else
            corner_run = 0;
        if (corner_run >= opt.max_corner_flights) {
            traj.termination = Termination::Stuck;
            traj.termination_detail = "corner accumulation";
            return traj;
        }

        const Vec2 v_out = reflect(v_in, normal);
        const FlightParabola out_seg{{hit->point, v_out}, g};

        Bounce b;
        b.impact = hit->point;
        b.t_flight = hit->t;
        b.v_in = v_in;
        b.v_out = v_out;
        b.alpha = m.tangent_angle(hit->point.x);
        b.focus_in = FlightParabola{{hit->point, v_in}, g}.focus();
        b.focus_out = out_seg.focus();
        b.degenerate_in = seg.is_degenerate();
        b.degenerate_out = out_seg.is_degenerate();
        traj.bounces.push_back(b);

        state = {hit->point, v_out};
    }
    traj.termination = Termination::MaxBounces;
    return traj;
}

// Launch state on the flight parabola with focus F and directrix H at
// abscissa x0; vx_sign picks the travel direction. Used to set up runs
// with a prescribed caustic parameter.
inline State launch_for_focus(const Vec2& F, double H, double x0, double g,
                              int vx_sign = +1) {
    const double f = 0.5 * (H - F.y);
    if (!(f > 0.0))
        throw Error("launch_for_focus: requires H > y_F");
    const double y_vertex = 0.5 * (H + F.y);
    const double y0 = y_vertex - (x0 - F.x) * (x0 - F.x) / (4.0 * f);
    const double vx = (vx_sign >= 0 ? 1.0 : -1.0) * std::sqrt(2.0 * g * f);
    const double vy = g * (F.x - x0) / vx;
    return {{x0, y0}, {vx, vy}};
}

} // namespace gravicaustic
