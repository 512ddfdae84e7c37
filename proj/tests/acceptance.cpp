// Acceptance table: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "pshlab/report.hpp"

using namespace pshlab;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " FAILED[" << what << "]";
        }
    }
};

const double kPi2 = kPi * kPi;

bool smooth_invariant(const FunctionSpec& f) {
    return f.smooth_off_origin && f.kind != Kind::MaxOfLogs && check_s1_invariance(f).invariant;
}

std::vector<FunctionSpec> smooth_catalog() {
    std::vector<FunctionSpec> out;
    for (const auto& n : catalog_names()) {
        const auto f = builtin(n);
        if (smooth_invariant(f)) out.push_back(f);
    }
    return out;
}

std::string g6(double x) {
    char b[32];
    std::snprintf(b, sizeof b, "%.6g", x);
    return b;
}

void c1(Outcome& o) {
    const auto f = builtin("log-z");
    const auto tau = residual_mass(f, default_schedule(f));
    const auto m = ma_mass_ball(f, 0.5);
    o.detail << "tau(log|z|)=" << num(tau.value) << " via " << method_name(tau.method)
             << ", MA(B_0.5)/pi^2=" << g6(m.value / kPi2);
    o.check(tau.method == TauMethod::BoundaryK && std::abs(tau.value - 1) <= 1e-12, "tau");
    o.check(std::abs(m.value - kPi2) <= 0.01 * kPi2, "volume");
}

void c2(Outcome& o) {
    for (double a : {0.5, 1.0, 2.0}) {
        const auto r = verify_bounds(make_radial("radial-a" + format_param(a), a));
        o.detail << "a=" << a << ": nu-a=" << g6(r.nu.value - a) << " lambda-a=" << g6(r.lambda.value - a)
                 << " tau-a^2=" << g6(r.tau.value - a * a) << "; ";
        o.check(std::abs(r.nu.value - a) <= 1e-10, "nu");
        o.check(std::abs(r.lambda.value - a) <= 1e-10, "lambda");
        o.check(std::abs(r.tau.value - a * a) <= 1e-8, "tau");
    }
}

void c3(Outcome& o) {
    for (int m : {1, 2, 3}) {
        const auto r = verify_bounds(make_demailly(m), 1e-3, 64, 128, -30.0);
        const double slack = r.upper_bound - r.tau.value;
        o.detail << "m=" << m << ": nu=" << g6(r.nu.value) << " lambda=" << g6(r.lambda.value)
                 << " tau=" << g6(r.tau.value) << " slack=" << g6(slack) << "; ";
        o.check(std::abs(r.nu.value - 1.0 / m) <= 1e-3, "nu");
        o.check(std::abs(r.lambda.value - m) <= 1e-2, "lambda");
        o.check(std::abs(r.tau.value - 1) <= 0.02, "tau");
        o.check(r.verdict_upper && slack >= 1, "upper bound slack");
    }
}

void pair_member(Outcome& o, const char* name, double nu, double lambda, double tau, double bound) {
    const auto r = verify_bounds(builtin(name));
    o.detail << "nu=" << g6(r.nu.value) << " lambda=" << g6(r.lambda.value) << " tau=" << g6(r.tau.value)
             << " bound=" << g6(r.upper_bound);
    o.check(std::abs(r.nu.value - nu) <= 1e-3, "nu");
    o.check(std::abs(r.lambda.value - lambda) <= 1e-2, "lambda");
    o.check(std::abs(r.tau.value - tau) <= 0.02 * tau, "tau");
    o.check(std::abs(r.upper_bound - bound) <= 0.02 * bound, "bound value");
    o.check(r.verdict_lower && r.verdict_upper, "bounds");
}

void c6(Outcome& o) {
    const auto r = verify_bounds(builtin("coman-guedj-n5"));
    o.detail << "invariant=" << (r.s1.invariant ? "yes" : "no") << " tau=" << g6(r.tau.value) << " via "
             << method_name(r.tau.method) << " bound=" << g6(r.upper_bound) << " note=\"" << r.note << "\"";
    o.check(!r.s1.invariant, "invariance");
    o.check(r.tau.method == TauMethod::VolumeOracle && std::abs(r.tau.value - 1) <= 0.05, "tau");
    o.check(std::abs(r.upper_bound - (2.0 / 5 + 1.0 / 25)) <= 1e-2, "bound value");
    o.check(!r.verdict_upper && r.note.find("violated") != std::string::npos &&
                r.note.find("not S^1-invariant") != std::string::npos,
            "flag");
}

void c7(Outcome& o) {
    double worst = 0;
    std::string at;
    for (const auto& f : smooth_catalog()) {
        const auto g = make_adapted_grid(f, -10);
        const auto specs = framed_specs(f, g);
        for (double t : {-2.0, -5.0, -10.0}) {
            const double k = functionals_at(f, t, g).K;
            std::vector<double> v(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) {
                const auto& nd = g.nodes[i];
                const RealHopf h{std::exp(t), 0.0, 2 * std::atan(std::exp(nd.s)), nd.phi_f};
                v[i] = 0.5 * threeform_density(specs[nd.frame], h) / fs_weight(direction_of(h));
            }
            const double rel = std::abs(integrate(v, g) - k) / std::max(std::abs(k), 1e-12);
            if (rel > worst) {
                worst = rel;
                at = f.name + " t=" + g6(t);
            }
        }
    }
    o.detail << "max relative 3-form vs decomposition " << g6(worst) << " (" << at << "), tol 1e-7";
    o.check(worst <= 1e-7, "3-form");
}

void c8(Outcome& o) {
    double worst = 0;
    std::string at;
    for (const auto& f : smooth_catalog()) {
        const double k = functionals_at(f, -2, make_adapted_grid(f, -2)).K / kPi;
        const double v = ma_mass_ball(f, std::exp(-2.0)).value / kPi2;
        const double rel = std::abs(k - v) / std::max(std::abs(k), 1e-6);
        if (rel > worst) {
            worst = rel;
            at = f.name;
        }
    }
    o.detail << "max relative BoundaryK vs volume at t=-2 " << g6(worst) << " (" << at << "), tol 1e-2";
    o.check(worst <= 0.01, "stokes");
}

void c9(Outcome& o) {
    double worst = 0;
    std::string at;
    for (const auto& f : smooth_catalog()) {
        const auto nu = lelong_number(f, schedule_to(f, -30)).value;
        const double j = functionals_at(f, -30, make_adapted_grid(f, -30)).J / kPi;
        if (std::abs(j - nu * nu) >= worst) {
            worst = std::abs(j - nu * nu);
            at = f.name;
        }
    }
    o.detail << "max |J(-30)/pi - nu^2| " << g6(worst) << " (" << at << "), tol 1e-3";
    o.check(worst <= 1e-3, "L2 limit");
}

void c10(Outcome& o) {
    double worst_id = 0, worst_ratio = INFINITY;
    std::string geo_pos, geo_neg, bad;
    for (const auto& f : smooth_catalog()) {
        const auto g = make_adapted_grid(f, -10);
        const auto a = check_decomposition_identity(trace(f, t_range(-10, -2, 0.1), g));
        const auto b = check_decomposition_identity(trace(f, t_range(-10, -2, 0.05), g));
        worst_id = std::max(worst_id, a.max_relative);
        if (a.max_relative > 1e-7) worst_ratio = std::min(worst_ratio, a.max_relative / b.max_relative);
        if (!check_convexity(trace(f, t_range(-8, -1, 0.5), make_adapted_grid(f, -8)), 1e-8).pass)
            bad += " convexity:" + f.name;
        const auto v = detect_geodesic(trace(f, t_range(-6, -1, 1), make_adapted_grid(f, -6)), f);
        const bool expect = f.name != "abs2" && f.name != "log-plus-abs2";
        (v.geodesic ? geo_pos : geo_neg) += " " + f.name;
        if (!v.consistent || v.geodesic != expect) bad += " geodesic:" + f.name;
    }
    o.detail << "identity max " << g6(worst_id) << " (tol 1e-3), min halving ratio above 1e-7 "
             << (std::isinf(worst_ratio) ? std::string("n/a") : g6(worst_ratio)) << " (need >= 3); geodesic yes:"
             << geo_pos << "; no:" << geo_neg;
    o.check(worst_id <= 1e-3, "identity");
    o.check(!(worst_ratio < 3), "halving");
    o.check(bad.empty(), bad);
}

void c11(Outcome& o) {
    std::string bad;
    double min_excess = INFINITY, worst_gap_ratio = 0, worst_slope_ratio = 0;
    RegularizeConfig cfg;
    for (const auto& f : smooth_catalog()) {
        const auto r = regularize_check(f, cfg);
        if (!r.pass()) bad += " " + f.name;
        min_excess = std::min(min_excess, r.monotone.min_excess);
        for (const auto& c : r.friedrichs) worst_gap_ratio = std::max(worst_gap_ratio, c.max_gap / c.bound);
        for (const auto& c : r.slope) worst_slope_ratio = std::max(worst_slope_ratio, c.M_B_eps / c.bound);
    }
    o.detail << "min u_eps - u " << g6(min_excess) << ", max gap/bound " << g6(worst_gap_ratio)
             << ", max M_B(u_eps)/bound " << g6(worst_slope_ratio);
    o.check(bad.empty(), bad);
}

std::string verify_dump(const VerifyConfig& cfg, const char* threads) {
    setenv("PSHLAB_THREADS", threads, 1);
    const auto out = verify_catalog(cfg);
    std::ostringstream os;
    write_reports_csv(os, out, cfg);
    return to_json(out, cfg).dump(2) + os.str();
}

void c12(Outcome& o) {
    VerifyConfig cfg;
    for (const auto& n : catalog_names())
        if (n != "coman-guedj-n5") cfg.functions.push_back(builtin(n));
    const char* prior = std::getenv("PSHLAB_THREADS");
    const std::string keep = prior ? prior : "";
    const std::string a = verify_dump(cfg, "1"), b = verify_dump(cfg, "1"), c = verify_dump(cfg, "3");
    if (prior) {
        setenv("PSHLAB_THREADS", keep.c_str(), 1);
    } else {
        unsetenv("PSHLAB_THREADS");
    }
    o.detail << "verify output " << a.size() << " bytes; repeat identical " << (a == b ? "yes" : "no")
             << ", 3 threads identical " << (a == c ? "yes" : "no");
    o.check(a == b && a == c, "bytes");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"normalization", c1},
        {"radial family", c2},
        {"Demailly family", c3},
        {"u1 (n=5)", [](Outcome& o) { pair_member(o, "u1-n5", 0.2, 1, 0.2, 0.44); }},
        {"u2 (n=5)", [](Outcome& o) { pair_member(o, "u2-n5", 1, 1, 1, 3); }},
        {"Coman-Guedj (n=5)", c6},
        {"decomposition vs 3-form", c7},
        {"Stokes consistency", c8},
        {"L2-Lelong limit", c9},
        {"ray identities", c10},
        {"mollification", c11},
        {"determinism", c12},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " exception: " << e.what();
        }
        if (!o.pass) ++failed;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
