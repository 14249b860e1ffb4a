#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "gravicaustic/verify.hpp"

namespace gravicaustic {

// Verification scenario as read from a JSON document:
// {mirror, x0, y0, vx, vy, g, bounces, checks: [names],
//  tolerances: {name: tol}}.
struct Scenario {
    std::string id;
    std::string mirror_text;
    double x0 = 0.0, y0 = 1.0, vx = 1.0, vy = 0.0;
    double g = 1.0;
    std::size_t bounces = 100;
    std::vector<std::string> checks;
    std::map<std::string, double> tolerances;

    double tol(const std::string& name, double fallback) const {
        const auto it = tolerances.find(name);
        return it == tolerances.end() ? fallback : it->second;
    }
};

inline Scenario scenario_from_json(const nlohmann::json& j, const std::string& id) {
    Scenario s;
    s.id = j.value("id", id);
    s.mirror_text = j.at("mirror").get<std::string>();
    s.x0 = j.value("x0", 0.0);
    s.y0 = j.value("y0", 1.0);
    s.vx = j.value("vx", 1.0);
    s.vy = j.value("vy", 0.0);
    s.g = j.value("g", 1.0);
    s.bounces = j.value("bounces", std::size_t{100});
    if (j.contains("checks"))
        s.checks = j.at("checks").get<std::vector<std::string>>();
    else
        s.checks = {"directrix", "foci_circle", "foci_slope", "foci_on_curve",
                    "confinement"};
    if (j.contains("tolerances"))
        for (const auto& [name, tol] : j.at("tolerances").items())
            s.tolerances[name] = tol.get<double>();
    return s;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open scenario file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("scenario parse error in " + path + ": " + e.what());
    }
    return scenario_from_json(j, path);
}

inline VerificationReport run_suite(const Scenario& s) {
    VerificationReport report;
    report.scenario_id = s.id;

    const Mirror m = parse_mirror(s.mirror_text);
    const State initial{{s.x0, s.y0}, {s.vx, s.vy}};
    const Trajectory traj = simulate(initial, m, s.g, s.bounces);

    for (const std::string& name : s.checks) {
        if (name == "directrix") {
            report.checks.push_back(check_directrix(traj, s.tol(name, 1e-9)));
        } else if (name == "foci_circle") {
            report.checks.push_back(check_foci_circle(traj, m, s.tol(name, 1e-8)));
        } else if (name == "foci_slope") {
            report.checks.push_back(check_foci_slope(traj, s.tol(name, 1e-8)));
        } else if (name == "foci_on_curve") {
            report.checks.push_back(check_foci_on_curve(traj, m, s.tol(name, 1e-7)));
        } else if (name == "confinement") {
            CheckResult r{.name = name, .tolerance = s.tol(name, 1e-6)};
            Vec2 F0{};
            bool have_focus = false;
            for (const Bounce& b : traj.bounces)
                if (!b.degenerate_in) { F0 = b.focus_in; have_focus = true; break; }
            if (!have_focus) {
                r.note = "skipped: all segments degenerate";
                report.checks.push_back(r);
                continue;
            }
            const double H = FlightParabola{initial, s.g}.directrix();
            const MatchResult match = match_L(m, F0);
            double span = 1.0;
            for (const Bounce& b : traj.bounces)
                span = std::max(span, std::abs(b.impact.x));
            const EnvelopePair env{{&m, match.L}, H};
            const ConfinedDomain dom(env, -4.0 * span, 4.0 * span);
            report.checks.push_back(check_confinement(traj, dom, 64, r.tolerance));
        } else if (name == "impact_oracle") {
            CheckResult r{.name = name, .tolerance = s.tol(name, 1e-7)};
            for (std::size_t i = 0; i + 1 < traj.segment_count() && i < 10; ++i) {
                const FlightParabola seg{traj.segment_start(i), s.g};
                const auto oracle = oracle_next_impact(seg, m);
                if (!oracle) continue;
                detail::track(r, std::abs(oracle->t - traj.bounces[i].t_flight),
                              detail::at_bounce(i));
            }
            detail::finish(r);
            report.checks.push_back(r);
        } else {
            throw Error("unknown check '" + name + "' in scenario " + s.id);
        }
    }
    return report;
}

inline nlohmann::json report_to_json(const VerificationReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckResult& c : r.checks) {
        nlohmann::json jc{{"name", c.name},
                          {"max_residual", c.max_residual},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass},
                          {"worst_location", c.worst_location}};
        if (!c.note.empty()) jc["note"] = c.note;
        checks.push_back(jc);
    }
    return {{"scenario", r.scenario_id},
            {"seed", r.seed},
            {"pass", r.all_pass()},
            {"checks", checks}};
}

} // namespace gravicaustic
