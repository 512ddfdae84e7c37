#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "pshlab/report.hpp"

using namespace pshlab;

namespace {

VerifyConfig small_config(std::vector<std::string> names) {
    VerifyConfig cfg;
    for (const auto& n : names) cfg.functions.push_back(builtin(n));
    cfg.n_theta = 16;
    cfg.n_phi = 32;
    return cfg;
}

std::string dump(const VerifyOutcome& o, const VerifyConfig& cfg) {
    std::ostringstream os;
    write_reports_csv(os, o, cfg);
    return to_json(o, cfg).dump(2) + os.str();
}

}  // namespace

TEST(Report, NumberFormatRoundTrips) {
    for (double x : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0}) EXPECT_EQ(std::stod(num(x)), x);
    EXPECT_EQ(num(0.5), "0.5");
}

TEST(Report, JsonSchema) {
    const auto cfg = small_config({"log-z", "max-demailly-m2"});
    const auto o = verify_catalog(cfg);
    const Json j = to_json(o, cfg);
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["tool"], "pshlab");
    EXPECT_EQ(j["version"], kVersion);
    EXPECT_EQ(j["command"], "verify");
    EXPECT_EQ(j["grid"], "16x32");
    EXPECT_EQ(j["seed"], 12345);
    EXPECT_TRUE(j["pass"]);
    ASSERT_EQ(j["reports"].size(), 2u);
    const auto& r = j["reports"][0];
    EXPECT_EQ(r["name"], "log-z");
    EXPECT_TRUE(r["s1_invariant"]);
    for (const char* k : {"nu", "lambda", "tau"}) {
        EXPECT_TRUE(r[k].contains("value")) << k;
        EXPECT_TRUE(r[k].contains("lower")) << k;
        EXPECT_TRUE(r[k].contains("upper")) << k;
        EXPECT_TRUE(r[k].contains("method")) << k;
    }
    EXPECT_DOUBLE_EQ(r["tau"]["value"].get<double>(), 1.0);
    EXPECT_EQ(r["tau"]["method"], "BoundaryK");
    EXPECT_TRUE(r["tau"].contains("stokes_check"));
    EXPECT_FALSE(r["schedule"].empty());
    EXPECT_TRUE(j["reports"][1]["skipped"]);
    EXPECT_FALSE(j["reports"][1].contains("tau"));
}

TEST(Report, CsvHeaders) {
    EXPECT_STREQ(kTraceHeader, "t,I,J,E,cross,K,nu_r,script_I");
    const auto tr = trace(builtin("log-z"), {-3, -2, -1}, make_grid(8, 8));
    std::ostringstream os;
    write_trace_csv(os, tr, "8x8", 7);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line.rfind("# pshlab", 0), 0u);
    EXPECT_NE(line.find("seed=7"), std::string::npos);
    std::getline(is, line);
    EXPECT_EQ(line, kTraceHeader);
    int rows = 0;
    while (std::getline(is, line)) {
        ++rows;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
    }
    EXPECT_EQ(rows, 3);

    const auto cfg = small_config({"radial-a2", "max-demailly-m2"});
    const auto o = verify_catalog(cfg);
    std::ostringstream rs;
    write_reports_csv(rs, o, cfg);
    std::istringstream ri(rs.str());
    std::getline(ri, line);
    std::getline(ri, line);
    EXPECT_EQ(line, kReportHeader);
    const auto cols = std::count(line.begin(), line.end(), ',');
    while (std::getline(ri, line)) EXPECT_EQ(std::count(line.begin(), line.end(), ','), cols) << line;
}

TEST(Report, Judge) {
    MassReport r;
    r.name = "x";
    r.upper_applicable = true;
    r.verdict_lower = r.verdict_upper = true;
    r.tol = 1e-3;
    EXPECT_TRUE(judge(r).empty());
    r.tau.error = 1e-2;
    ASSERT_EQ(judge(r).size(), 1u);
    EXPECT_NE(judge(r)[0].find("tolerance"), std::string::npos);
    r.tau.error = 0;
    r.verdict_upper = false;
    EXPECT_NE(judge(r)[0].find("upper bound"), std::string::npos);

    MassReport cg;
    cg.name = "cg";
    cg.upper_applicable = false;
    cg.tau.value = 1.0;
    cg.upper_bound = 0.44;
    EXPECT_TRUE(judge(cg).empty());
    cg.tau.error = 0.6;
    EXPECT_EQ(judge(cg).size(), 1u);

    MassReport sk;
    sk.skipped = true;
    EXPECT_TRUE(judge(sk).empty());
}

TEST(Report, TightToleranceFails) {
    // u2 carries a quadrature error near 2e-8; the Demailly surrogates resolve to 1e-13
    auto cfg = small_config({"demailly-m2", "u2-n5"});
    cfg.n_theta = 64;
    cfg.n_phi = 128;
    cfg.tol = 1e-9;
    const auto o = verify_catalog(cfg);
    ASSERT_EQ(o.failures.size(), 1u);
    EXPECT_EQ(o.failures[0].rfind("u2-n5", 0), 0u);
    EXPECT_NE(o.failures[0].find("tolerance"), std::string::npos);
}

TEST(Report, FamilyMember) {
    EXPECT_EQ(family_member("demailly", 3), "demailly-m3");
    EXPECT_EQ(family_member("radial", 0.5), "radial-a0.5");
    EXPECT_EQ(family_member("u2", 5), "u2-n5");
    EXPECT_EQ(family_member("max-demailly", 2), "max-demailly-m2");
    EXPECT_NO_THROW(builtin(family_member("coman-guedj", 3)));
    EXPECT_THROW(family_member("nope", 1), ArgumentError);
}

TEST(ReportProperty, OutputIndependentOfRunAndThreads) {
    const auto cfg = small_config({"log-z", "demailly-m2", "u1-n5", "abs2"});
    setenv("PSHLAB_THREADS", "1", 1);
    const std::string a = dump(verify_catalog(cfg), cfg);
    const std::string b = dump(verify_catalog(cfg), cfg);
    setenv("PSHLAB_THREADS", "3", 1);
    const std::string c = dump(verify_catalog(cfg), cfg);
    unsetenv("PSHLAB_THREADS");
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
}

TEST(Report, RegularizeJson) {
    RegularizeConfig cfg;
    const auto f = builtin("log-z");
    const auto o = regularize_check(f, cfg);
    EXPECT_TRUE(o.pass());
    const Json j = to_json(o, f, cfg);
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["command"], "regularize-check");
    EXPECT_EQ(j["seed"], 2024);
    EXPECT_EQ(j["friedrichs"].size(), 2u);
    EXPECT_EQ(j["slope_bound"].size(), 3u);
    EXPECT_EQ(j["slope_bound"][2]["beta"], 0.1);
}
