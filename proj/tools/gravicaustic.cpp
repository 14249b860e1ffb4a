// gravicaustic: simulate a point mass bouncing inside a reflecting mirror
// under gravity, and compute the foci curve and trajectory envelopes.
//
// Exit codes: 0 success, 1 configuration error, 2 abnormal simulation
// termination, 3 verification failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gravicaustic/caustics.hpp"
#include "gravicaustic/dynamics.hpp"
#include "gravicaustic/io.hpp"
#include "gravicaustic/mirror.hpp"
#include "gravicaustic/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gravicaustic;

namespace {

struct KRange {
    double min = -5.0;
    double max = 5.0;
    int count = 1000;
};

struct RunConfig {
    std::string mirror = "parabola:fm=1";
    double x0 = 0.0, y0 = 2.0, vx = 1.0, vy = 0.0;
    double g = 1.0;
    std::size_t bounces = 100;
    std::optional<double> L; // default: matched from the first focus
    std::optional<double> H; // default: from the launch energy
    KRange k_range;
    std::string out_dir = ".";
    std::set<std::string> formats = {"csv", "json"};
};

KRange parse_k_range(const std::string& text) {
    KRange r;
    char c1, c2;
    std::istringstream in(text);
    if (!(in >> r.min >> c1 >> r.max >> c2 >> r.count) || c1 != ':' || c2 != ':' ||
        r.count < 2 || !(r.min < r.max))
        throw Error("bad --k-range, expected min:max:count with min < max, count >= 2");
    return r;
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("config parse error in " + path + ": " + e.what());
    }
    cfg.mirror = j.value("mirror", cfg.mirror);
    cfg.x0 = j.value("x0", cfg.x0);
    cfg.y0 = j.value("y0", cfg.y0);
    cfg.vx = j.value("vx", cfg.vx);
    cfg.vy = j.value("vy", cfg.vy);
    cfg.g = j.value("g", cfg.g);
    cfg.bounces = j.value("bounces", cfg.bounces);
    if (j.contains("L")) cfg.L = j["L"].get<double>();
    if (j.contains("H")) cfg.H = j["H"].get<double>();
    if (j.contains("k_range")) {
        const auto& k = j["k_range"];
        cfg.k_range.min = k.value("min", cfg.k_range.min);
        cfg.k_range.max = k.value("max", cfg.k_range.max);
        cfg.k_range.count = k.value("count", cfg.k_range.count);
    }
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    if (j.contains("formats")) {
        cfg.formats.clear();
        for (const auto& f : j["formats"]) cfg.formats.insert(f.get<std::string>());
    }
}

std::string termination_name(Termination t) {
    switch (t) {
    case Termination::MaxBounces: return "max_bounces";
    case Termination::Escaped: return "escaped";
    case Termination::Stuck: return "stuck";
    }
    return "?";
}

struct Derived {
    Mirror mirror;
    State initial;
    double H;
    std::optional<MatchResult> match;
};

Derived derive(const RunConfig& cfg) {
    Derived d{parse_mirror(cfg.mirror), {{cfg.x0, cfg.y0}, {cfg.vx, cfg.vy}}, 0.0, {}};
    d.H = cfg.H ? *cfg.H : FlightParabola{d.initial, cfg.g}.directrix();
    if (cfg.L) {
        d.match = MatchResult{*cfg.L, 0.0, 0.0};
    } else {
        const FlightParabola first{d.initial, cfg.g};
        if (!first.is_degenerate())
            d.match = match_L(d.mirror, first.focus());
    }
    return d;
}

std::vector<Vec2> arc_samples(const FlightParabola& seg, double t_end, int n = 64) {
    std::vector<Vec2> pts;
    pts.reserve(n + 1);
    for (int i = 0; i <= n; ++i) pts.push_back(seg.position_at(t_end * i / n));
    return pts;
}

std::vector<Vec2> mirror_polyline(const Mirror& m, double x_lo, double x_hi, int n = 512) {
    std::vector<Vec2> pts;
    pts.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / n;
        if (m.in_domain(x)) pts.push_back({x, m.height(x)});
    }
    return pts;
}

int cmd_simulate(const RunConfig& cfg) {
    const Derived d = derive(cfg);
    const Trajectory traj = simulate(d.initial, d.mirror, cfg.g, cfg.bounces);

    fs::create_directories(cfg.out_dir);

    if (cfg.formats.count("csv")) {
        CsvWriter csv({"bounce_index", "t_flight", "x", "y", "vx", "vy",
                       "focus_x", "focus_y", "alpha"});
        for (std::size_t i = 0; i < traj.bounces.size(); ++i) {
            const Bounce& b = traj.bounces[i];
            csv.row({std::to_string(i), fmt17(b.t_flight), fmt17(b.impact.x),
                     fmt17(b.impact.y), fmt17(b.v_out.x), fmt17(b.v_out.y),
                     fmt17(b.focus_out.x), fmt17(b.focus_out.y), fmt17(b.alpha)});
        }
        csv.save(cfg.out_dir + "/trajectory.csv");
    }

    if (cfg.formats.count("json")) {
        json summary{{"termination", termination_name(traj.termination)},
                     {"termination_detail", traj.termination_detail},
                     {"bounces", traj.bounces.size()},
                     {"H", d.H}};
        if (d.match) {
            summary["L"] = d.match->L;
            summary["match_residual"] = d.match->residual;
        }
        // Residual stats: directrix drift over the run.
        double max_drift = 0.0;
        for (std::size_t i = 0; i < traj.segment_count(); ++i) {
            const double H = FlightParabola{traj.segment_start(i), cfg.g}.directrix();
            max_drift = std::max(max_drift, std::abs(H - d.H));
        }
        summary["max_directrix_drift"] = max_drift;
        std::ofstream(cfg.out_dir + "/summary.json") << summary.dump(2) << "\n";
    }

    if (cfg.formats.count("svg")) {
        SvgPlot svg;
        double x_lo = d.initial.pos.x, x_hi = d.initial.pos.x;
        for (const Bounce& b : traj.bounces) {
            x_lo = std::min(x_lo, b.impact.x);
            x_hi = std::max(x_hi, b.impact.x);
        }
        const double pad = 0.5 * std::max(1.0, x_hi - x_lo);
        for (std::size_t i = 0; i < traj.bounces.size(); ++i) {
            const FlightParabola seg{traj.segment_start(i), cfg.g};
            svg.polyline(arc_samples(seg, traj.bounces[i].t_flight), "#2a9d2a", 0.01);
        }
        svg.polyline(mirror_polyline(d.mirror, x_lo - pad, x_hi + pad), "#000000", 0.03);
        if (d.match) {
            const EnvelopePair env{{&d.mirror, d.match->L}, d.H};
            for (const Branch br : {Branch::Plus, Branch::Minus}) {
                const SampledCurve c = sample_envelope(env, br, x_lo - pad, x_hi + pad, 1024);
                std::vector<Vec2> pts;
                for (const auto& [k, p] : c.points) pts.push_back(p);
                svg.polyline(pts, "#d62728", 0.03);
            }
        }
        svg.save(cfg.out_dir + "/trajectory.svg");
    }

    if (traj.termination == Termination::Stuck)
        return 2;
    return 0;
}

int cmd_foci(const RunConfig& cfg) {
    const Derived d = derive(cfg);
    if (!d.match)
        throw Error("foci: no caustic parameter (pass --L or a non-vertical launch)");
    const FociCurve curve{&d.mirror, d.match->L};
    const SampledCurve c = sample_foci(curve, cfg.k_range.min, cfg.k_range.max,
                                       cfg.k_range.count);

    fs::create_directories(cfg.out_dir);
    if (cfg.formats.count("csv")) {
        CsvWriter csv({"k", "x", "y"});
        for (const auto& [k, p] : c.points)
            csv.row({fmt17(k), fmt17(p.x), fmt17(p.y)});
        csv.save(cfg.out_dir + "/foci.csv");
    }
    if (cfg.formats.count("json")) {
        json summary{{"L", d.match->L},
                     {"H", d.H},
                     {"points", c.points.size()},
                     {"singularities", c.singularities}};
        std::ofstream(cfg.out_dir + "/summary.json") << summary.dump(2) << "\n";
    }
    if (cfg.formats.count("svg")) {
        SvgPlot svg;
        std::vector<Vec2> pts;
        for (const auto& [k, p] : c.points) pts.push_back(p);
        svg.polyline(mirror_polyline(d.mirror, cfg.k_range.min, cfg.k_range.max),
                     "#000000", 0.03);
        svg.polyline(pts, "#1f77b4", 0.03);
        // Geometric construction: sparse members of the circle family.
        for (int i = 0; i <= 12; ++i) {
            const double k = cfg.k_range.min +
                             (cfg.k_range.max - cfg.k_range.min) * i / 12.0;
            if (!d.mirror.in_domain(k)) continue;
            const double r = d.match->L - d.mirror.height(k);
            if (r > 0.0)
                svg.circle_outline({k, d.mirror.height(k)}, r, "#bbbbbb", 0.01);
        }
        svg.save(cfg.out_dir + "/foci.svg");
    }
    return 0;
}

int cmd_envelope(const RunConfig& cfg) {
    const Derived d = derive(cfg);
    if (!d.match)
        throw Error("envelope: no caustic parameter (pass --L or a non-vertical launch)");
    const EnvelopePair env{{&d.mirror, d.match->L}, d.H};
    const SampledCurve plus = sample_envelope(env, Branch::Plus, cfg.k_range.min,
                                              cfg.k_range.max, cfg.k_range.count);
    const SampledCurve minus = sample_envelope(env, Branch::Minus, cfg.k_range.min,
                                               cfg.k_range.max, cfg.k_range.count);

    fs::create_directories(cfg.out_dir);
    if (cfg.formats.count("csv")) {
        // Blank cells where a branch is undefined at that k.
        CsvWriter csv({"k", "x_plus", "y_plus", "x_minus", "y_minus"});
        std::size_t ip = 0, im = 0;
        for (int i = 0; i < cfg.k_range.count; ++i) {
            const double k = cfg.k_range.min +
                             (cfg.k_range.max - cfg.k_range.min) * i /
                                 (cfg.k_range.count - 1);
            std::string xp, yp, xm, ym;
            if (ip < plus.points.size() && plus.points[ip].first == k) {
                xp = fmt17(plus.points[ip].second.x);
                yp = fmt17(plus.points[ip].second.y);
                ++ip;
            }
            if (im < minus.points.size() && minus.points[im].first == k) {
                xm = fmt17(minus.points[im].second.x);
                ym = fmt17(minus.points[im].second.y);
                ++im;
            }
            csv.row({fmt17(k), xp, yp, xm, ym});
        }
        csv.save(cfg.out_dir + "/envelope.csv");
    }
    if (cfg.formats.count("json")) {
        json summary{{"L", d.match->L},
                     {"H", d.H},
                     {"singularities_plus", plus.singularities},
                     {"singularities_minus", minus.singularities}};
        std::ofstream(cfg.out_dir + "/summary.json") << summary.dump(2) << "\n";
    }
    if (cfg.formats.count("svg")) {
        SvgPlot svg;
        svg.polyline(mirror_polyline(d.mirror, cfg.k_range.min, cfg.k_range.max),
                     "#000000", 0.03);
        const SampledCurve foci = sample_foci({&d.mirror, d.match->L}, cfg.k_range.min,
                                              cfg.k_range.max, cfg.k_range.count);
        std::vector<Vec2> pts;
        for (const auto& [k, p] : foci.points) pts.push_back(p);
        svg.polyline(pts, "#1f77b4", 0.03);
        for (const SampledCurve* c : {&plus, &minus}) {
            pts.clear();
            for (const auto& [k, p] : c->points) pts.push_back(p);
            svg.polyline(pts, "#d62728", 0.03);
        }
        svg.polyline({{cfg.k_range.min, d.H}, {cfg.k_range.max, d.H}}, "#888888", 0.015);
        svg.save(cfg.out_dir + "/envelope.svg");
    }
    return 0;
}

int cmd_verify(const std::string& scenario_path, const std::string& out_dir) {
    const Scenario s = load_scenario(scenario_path);
    const VerificationReport report = run_suite(s);
    fs::create_directories(out_dir);
    std::ofstream(out_dir + "/report.json") << report_to_json(report).dump(2) << "\n";
    for (const CheckResult& c : report.checks)
        std::cout << (c.pass ? "PASS" : "FAIL") << " " << c.name
                  << " max_residual=" << c.max_residual << " tol=" << c.tolerance
                  << "\n";
    return report.all_pass() ? 0 : 3;
}

int cmd_sweep(RunConfig cfg, const std::string& run, const std::string& param,
              const std::vector<double>& values) {
    const std::string base_dir = cfg.out_dir;
    fs::create_directories(base_dir);
    json index = json::array();
    int rc = 0;
    for (const double v : values) {
        RunConfig c = cfg;
        if (param == "L") c.L = v;
        else if (param == "H") c.H = v;
        else if (param == "g") c.g = v;
        else if (param == "x0") c.x0 = v;
        else if (param == "y0") c.y0 = v;
        else if (param == "vx") c.vx = v;
        else if (param == "vy") c.vy = v;
        else if (param == "bounces") c.bounces = static_cast<std::size_t>(v);
        else throw Error("sweep: unsupported parameter '" + param + "'");

        std::ostringstream dir;
        dir << base_dir << "/" << param << "_" << v;
        c.out_dir = dir.str();
        int one = 0;
        if (run == "simulate") one = cmd_simulate(c);
        else if (run == "foci") one = cmd_foci(c);
        else if (run == "envelope") one = cmd_envelope(c);
        else throw Error("sweep: unsupported run command '" + run + "'");
        rc = std::max(rc, one);
        index.push_back({{"param", param}, {"value", v}, {"dir", c.out_dir},
                         {"exit", one}});
    }
    std::ofstream(base_dir + "/index.json") << index.dump(2) << "\n";
    return rc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gravitational billiard simulator with foci-curve and "
                 "envelope computation"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path, k_range_text, formats_text, scenario_path;
    std::string sweep_param, sweep_values_text, sweep_run = "simulate";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file (flags override)");
        sub->add_option("--mirror", cfg.mirror,
                        "mirror: 'parabola:fm=<v>', 'line:alpha_deg=<v>', "
                        "'hyperbola', or an expression in x");
        sub->add_option("--x0", cfg.x0, "launch x");
        sub->add_option("--y0", cfg.y0, "launch y");
        sub->add_option("--vx", cfg.vx, "launch vx");
        sub->add_option("--vy", cfg.vy, "launch vy");
        sub->add_option("--g", cfg.g, "gravitational acceleration");
        sub->add_option("--bounces", cfg.bounces, "max bounce count");
        sub->add_option("--L", [&cfg](const std::vector<std::string>& v) {
            cfg.L = std::stod(v.back());
            return true;
        }, "caustic parameter (default: matched from the initial focus)");
        sub->add_option("--H", [&cfg](const std::vector<std::string>& v) {
            cfg.H = std::stod(v.back());
            return true;
        }, "directrix height (default: from launch energy)");
        sub->add_option("--k-range", k_range_text, "min:max:count for curve sampling");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--format", formats_text, "comma list of csv,json,svg");
    };

    CLI::App* sim = app.add_subcommand("simulate", "run a bounce simulation");
    add_common(sim);
    CLI::App* foci = app.add_subcommand("foci", "sample the foci curve");
    add_common(foci);
    CLI::App* env = app.add_subcommand("envelope", "sample the envelope curves");
    add_common(env);

    CLI::App* ver = app.add_subcommand("verify", "run a verification scenario");
    ver->add_option("scenario", scenario_path, "scenario JSON file")->required();
    ver->add_option("--out", cfg.out_dir, "output directory");

    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
    add_common(sweep);
    sweep->add_option("--param", sweep_param, "parameter to sweep")->required();
    sweep->add_option("--values", sweep_values_text, "comma list of values")->required();
    sweep->add_option("--run", sweep_run, "inner command: simulate|foci|envelope");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            RunConfig from_file;
            apply_config_file(from_file, config_path);
            // CLI flags already wrote into cfg; take file values only for
            // fields the command line left untouched.
            RunConfig merged = from_file;
            auto touched = [&](const std::string& name) {
                for (CLI::App* sub : {sim, foci, env, sweep})
                    if (sub->parsed() && sub->count(name) > 0) return true;
                return false;
            };
            if (touched("--mirror")) merged.mirror = cfg.mirror;
            if (touched("--x0")) merged.x0 = cfg.x0;
            if (touched("--y0")) merged.y0 = cfg.y0;
            if (touched("--vx")) merged.vx = cfg.vx;
            if (touched("--vy")) merged.vy = cfg.vy;
            if (touched("--g")) merged.g = cfg.g;
            if (touched("--bounces")) merged.bounces = cfg.bounces;
            if (cfg.L) merged.L = cfg.L;
            if (cfg.H) merged.H = cfg.H;
            if (touched("--out")) merged.out_dir = cfg.out_dir;
            cfg = merged;
        }
        if (!k_range_text.empty()) cfg.k_range = parse_k_range(k_range_text);
        if (!formats_text.empty()) {
            cfg.formats.clear();
            std::istringstream in(formats_text);
            std::string tok;
            while (std::getline(in, tok, ',')) {
                if (tok != "csv" && tok != "json" && tok != "svg")
                    throw Error("unknown format '" + tok + "'");
                cfg.formats.insert(tok);
            }
        }
        if (cfg.formats.empty())
            throw Error("formats must be non-empty");

        if (sim->parsed()) return cmd_simulate(cfg);
        if (foci->parsed()) return cmd_foci(cfg);
        if (env->parsed()) return cmd_envelope(cfg);
        if (ver->parsed()) return cmd_verify(scenario_path, cfg.out_dir);
        if (sweep->parsed()) {
            std::vector<double> values;
            std::istringstream in(sweep_values_text);
            std::string tok;
            while (std::getline(in, tok, ','))
                values.push_back(std::stod(tok));
            if (values.empty())
                throw Error("sweep: --values must be non-empty");
            return cmd_sweep(cfg, sweep_run, sweep_param, values);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
