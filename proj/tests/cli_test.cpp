#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(GRAVICAUSTIC_BIN) + " " + args +
                            " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

json slurp_json(const fs::path& p) { return json::parse(slurp(p)); }

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::path(testing::TempDir()) / ("gravicaustic_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

// Launch on the parabola x^2/4 whose flight focus is (0,-2) with H = 5.
const std::string kLaunch =
    " --mirror parabola:fm=1 --x0 2 --y0 1.2142857142857144"
    " --vx 2.6457513110645907 --vy -0.7559289460184544 --g 1";

} // namespace

TEST(CliSimulate, ProducesCsvJsonSvg) {
    const fs::path d = fresh_dir("sim");
    ASSERT_EQ(run("simulate" + kLaunch + " --bounces 20 --out " + d.string() +
                  " --format csv,json,svg"),
              0);

    const std::string csv = slurp(d / "trajectory.csv");
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    EXPECT_EQ(header, "bounce_index,t_flight,x,y,vx,vy,focus_x,focus_y,alpha");
    int rows = 0;
    for (std::string l; std::getline(lines, l);) ++rows;
    EXPECT_EQ(rows, 20);

    const json summary = slurp_json(d / "summary.json");
    EXPECT_EQ(summary.at("termination"), "max_bounces");
    EXPECT_EQ(summary.at("bounces"), 20);
    EXPECT_NEAR(summary.at("H").get<double>(), 5.0, 1e-12);
    EXPECT_NEAR(summary.at("L").get<double>(), 2.0, 1e-8);
    EXPECT_LT(summary.at("max_directrix_drift").get<double>(), 1e-10);

    const std::string svg = slurp(d / "trajectory.svg");
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("viewBox"), std::string::npos);
    EXPECT_NE(svg.find("polyline"), std::string::npos);
}

TEST(CliSimulate, CsvIsByteStableAcrossRuns) {
    const fs::path d1 = fresh_dir("stable1");
    const fs::path d2 = fresh_dir("stable2");
    const std::string args = "simulate" + kLaunch + " --bounces 50 --format csv --out ";
    ASSERT_EQ(run(args + d1.string()), 0);
    ASSERT_EQ(run(args + d2.string()), 0);
    EXPECT_EQ(slurp(d1 / "trajectory.csv"), slurp(d2 / "trajectory.csv"));
}

TEST(CliSimulate, ZeroBouncesGivesHeaderOnlyCsv) {
    const fs::path d = fresh_dir("zero");
    ASSERT_EQ(run("simulate" + kLaunch + " --bounces 0 --format csv --out " +
                  d.string()),
              0);
    EXPECT_EQ(slurp(d / "trajectory.csv"),
              "bounce_index,t_flight,x,y,vx,vy,focus_x,focus_y,alpha\n");
}

TEST(CliFoci, SamplesRequestedRange) {
    const fs::path d = fresh_dir("foci");
    ASSERT_EQ(run("foci" + kLaunch + " --k-range -5:5:101 --out " + d.string()), 0);

    const std::string csv = slurp(d / "foci.csv");
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    EXPECT_EQ(header, "k,x,y");
    int rows = 0;
    std::string first_row, last_row;
    for (std::string l; std::getline(lines, l); ++rows) {
        if (rows == 0) first_row = l;
        last_row = l;
    }
    EXPECT_EQ(rows, 101);
    EXPECT_EQ(first_row.substr(0, 3), "-5,");
    EXPECT_EQ(last_row.substr(0, 2), "5,");

    const json summary = slurp_json(d / "summary.json");
    EXPECT_NEAR(summary.at("L").get<double>(), 2.0, 1e-8);
    EXPECT_EQ(summary.at("points"), 101);
}

TEST(CliEnvelope, BlankCellsWhereBranchUndefined) {
    const fs::path d = fresh_dir("env");
    ASSERT_EQ(run("envelope" + kLaunch + " --k-range -5:5:11 --out " + d.string() +
                  " --format csv,json,svg"),
              0);

    const std::string csv = slurp(d / "envelope.csv");
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    EXPECT_EQ(header, "k,x_plus,y_plus,x_minus,y_minus");
    bool saw_blank = false, saw_k0 = false;
    int rows = 0;
    for (std::string l; std::getline(lines, l); ++rows) {
        EXPECT_EQ(std::count(l.begin(), l.end(), ','), 4) << l;
        if (l.find(",,") != std::string::npos) saw_blank = true;
        if (l.rfind("0,", 0) == 0) saw_k0 = true;
    }
    EXPECT_EQ(rows, 11);
    // k = 0 is the degenerate vertex point: one branch column is blank there.
    EXPECT_TRUE(saw_k0);
    EXPECT_TRUE(saw_blank);
    EXPECT_NE(slurp(d / "envelope.svg").find("viewBox"), std::string::npos);
}

TEST(CliVerify, PassingScenario) {
    const fs::path d = fresh_dir("verify");
    const json scenario = {
        {"id", "cli-parabolic"},
        {"mirror", "parabola:fm=1"},
        {"x0", 2.0}, {"y0", 1.2142857142857144},
        {"vx", 2.6457513110645907}, {"vy", -0.7559289460184544},
        {"g", 1.0}, {"bounces", 40},
    };
    const fs::path sf = d / "scenario.json";
    std::ofstream(sf) << scenario.dump(2);

    const std::string out = (d / "out").string();
    ASSERT_EQ(run("verify " + sf.string() + " --out " + out), 0);
    const json report = slurp_json(fs::path(out) / "report.json");
    EXPECT_EQ(report.at("scenario"), "cli-parabolic");
    EXPECT_TRUE(report.at("pass").get<bool>());
    EXPECT_EQ(report.at("checks").size(), 5u);
}

TEST(CliVerify, FailingScenarioExitsThree) {
    const fs::path d = fresh_dir("verify_fail");
    const json scenario = {
        {"mirror", "parabola:fm=1"},
        {"x0", 2.0}, {"y0", 1.2142857142857144},
        {"vx", 2.6457513110645907}, {"vy", -0.7559289460184544},
        {"bounces", 10},
        {"checks", {"directrix"}},
        {"tolerances", {{"directrix", 1e-30}}},
    };
    const fs::path sf = d / "scenario.json";
    std::ofstream(sf) << scenario.dump(2);
    EXPECT_EQ(run("verify " + sf.string() + " --out " + (d / "out").string()), 3);
}

TEST(CliSweep, WritesPerValueDirsAndIndex) {
    const fs::path d = fresh_dir("sweep");
    ASSERT_EQ(run("sweep" + kLaunch +
                  " --param L --values 1.5,2 --run envelope --k-range -4:4:64 --out " +
                  d.string()),
              0);
    const json index = slurp_json(d / "index.json");
    ASSERT_EQ(index.size(), 2u);
    EXPECT_EQ(index[0].at("param"), "L");
    EXPECT_EQ(index[0].at("exit"), 0);
    EXPECT_TRUE(fs::exists(d / "L_1.5" / "envelope.csv"));
    EXPECT_TRUE(fs::exists(d / "L_2" / "envelope.csv"));
}

TEST(CliConfig, FileValuesUsedAndFlagsOverride) {
    const fs::path d = fresh_dir("config");
    const json config = {
        {"mirror", "parabola:fm=1"},
        {"x0", 2.0}, {"y0", 1.2142857142857144},
        {"vx", 2.6457513110645907}, {"vy", -0.7559289460184544},
        {"bounces", 5},
        {"formats", {"json"}},
    };
    const fs::path cf = d / "config.json";
    std::ofstream(cf) << config.dump(2);

    const std::string out = (d / "out").string();
    ASSERT_EQ(run("simulate --config " + cf.string() + " --bounces 7 --out " + out), 0);
    EXPECT_FALSE(fs::exists(fs::path(out) / "trajectory.csv")); // formats from file
    const json summary = slurp_json(fs::path(out) / "summary.json");
    EXPECT_EQ(summary.at("bounces"), 7); // flag overrides file
}

TEST(CliErrors, ExitCodeOne) {
    const fs::path d = fresh_dir("errors");
    EXPECT_EQ(run("simulate --format bogus --out " + d.string()), 1);
    EXPECT_EQ(run("simulate --k-range 5:1:10 --out " + d.string()), 1);
    EXPECT_EQ(run("simulate --mirror 'sin(' --out " + d.string()), 1);
    EXPECT_EQ(run("verify " + (d / "missing.json").string()), 1);
    EXPECT_NE(run("no-such-command"), 0);
}
