#pragma once

// Machine-readable reports: JSON (schema 1) and CSV writers for traces,
// mass reports, catalog verification, sweeps and mollification checks.

#include <json.hpp>

#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pshlab/catalog.hpp"
#include "pshlab/oracle.hpp"
#include "pshlab/ray.hpp"
#include "pshlab/regularize.hpp"

namespace pshlab {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kSchema = 1;

using Json = nlohmann::ordered_json;

/// Locale-independent round-trip formatting.
inline std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline Json bracket(double value, double lower, double upper) {
    return Json{{"value", value}, {"lower", lower}, {"upper", upper}};
}

inline Json to_json(const LelongEstimate& e) {
    Json j = bracket(e.value, e.lower, e.upper);
    j["method"] = method_name(e.method);
    j["t_used"] = e.t_used;
    j["samples"] = e.samples;
    j["warning"] = e.warning;
    return j;
}

inline Json to_json(const TauEstimate& e) {
    Json j = bracket(e.value, e.lower, e.upper);
    j["error"] = e.error;
    j["method"] = method_name(e.method);
    j["t_used"] = e.t_used;
    j["samples"] = e.samples;
    if (e.method == TauMethod::BoundaryK)
        j["stokes_check"] = {{"t", e.check_t}, {"boundary", e.check_boundary}, {"volume", e.check_volume}};
    return j;
}

inline Json to_json(const MassReport& r) {
    Json j;
    j["name"] = r.name;
    j["s1_invariant"] = r.s1.invariant;
    j["s1_max_violation"] = r.s1.max_violation;
    j["skipped"] = r.skipped;
    j["note"] = r.note;
    if (r.skipped) return j;
    j["grid"] = r.grid;
    j["schedule"] = r.schedule;
    j["a_schedule"] = r.a_schedule;
    j["nu"] = to_json(r.nu);
    j["lambda"] = to_json(r.lambda);
    j["tau"] = to_json(r.tau);
    j["lower_bound"] = r.lower_bound;
    j["upper_bound"] = r.upper_bound;
    j["verdict_lower"] = r.verdict_lower;
    j["verdict_upper"] = r.verdict_upper;
    j["upper_applicable"] = r.upper_applicable;
    j["tol"] = r.tol;
    j["uncertainty"] = r.uncertainty();
    return j;
}

inline Json header_json(const std::string& command, const std::string& grid, std::uint64_t seed) {
    return Json{{"schema", kSchema}, {"tool", "pshlab"}, {"version", kVersion}, {"command", command},
                {"grid", grid}, {"seed", seed}};
}

inline constexpr const char* kTraceHeader = "t,I,J,E,cross,K,nu_r,script_I";

/// Trace as CSV. Metadata lines start with '#' and precede the header.
inline void write_trace_csv(std::ostream& os, const RayTrace& tr, const std::string& grid, std::uint64_t seed) {
    os << "# pshlab " << kVersion << " function=" << tr.f_name << " grid=" << grid << " seed=" << seed << "\n";
    os << kTraceHeader << "\n";
    for (const auto& r : tr.records)
        os << num(r.t) << "," << num(r.I) << "," << num(r.J) << "," << num(r.E) << "," << num(r.cross) << ","
           << num(r.K) << "," << num(r.nu_r) << "," << num(r.script_I) << "\n";
}

inline constexpr const char* kReportHeader =
    "name,s1_invariant,nu,nu_lower,nu_upper,lambda,lambda_lower,lambda_upper,tau,tau_lower,tau_upper,tau_error,"
    "tau_method,lower_bound,upper_bound,verdict_lower,verdict_upper,note";

inline std::string report_row(const MassReport& r) {
    std::ostringstream os;
    os << r.name << "," << (r.s1.invariant ? 1 : 0);
    if (r.skipped) {
        os << std::string(15, ',') << "\"" << r.note << "\"";
        return os.str();
    }
    os << "," << num(r.nu.value) << "," << num(r.nu.lower) << "," << num(r.nu.upper) << "," << num(r.lambda.value)
       << "," << num(r.lambda.lower) << "," << num(r.lambda.upper) << "," << num(r.tau.value) << ","
       << num(r.tau.lower) << "," << num(r.tau.upper) << "," << num(r.tau.error) << "," << method_name(r.tau.method)
       << "," << num(r.lower_bound) << "," << num(r.upper_bound) << "," << (r.verdict_lower ? 1 : 0) << ","
       << (r.verdict_upper ? 1 : 0) << ",\"" << r.note << "\"";
    return os.str();
}

// ---------------------------------------------------------------- verify

struct VerifyConfig {
    std::vector<FunctionSpec> functions;
    double tol = 1e-3;
    int n_theta = 64, n_phi = 128;
    std::optional<double> t_min;
    std::uint64_t seed = 12345;
};

struct VerifyOutcome {
    std::vector<MassReport> reports;
    std::vector<std::string> failures;
    bool pass() const { return failures.empty(); }
};

/// Failure reasons for one report. S^1-invariant members must satisfy both
/// bounds with uncertainty within tol; other members must violate the upper
/// bound by more than their uncertainty.
inline std::vector<std::string> judge(const MassReport& r) {
    std::vector<std::string> why;
    if (r.skipped) return why;
    if (r.upper_applicable) {
        if (!r.verdict_lower) why.push_back(r.name + ": lower bound nu^2 <= tau fails");
        if (!r.verdict_upper) why.push_back(r.name + ": upper bound tau <= 2 lambda nu + nu^2 fails");
        if (r.uncertainty() > r.tol)
            why.push_back(r.name + ": uncertainty " + num(r.uncertainty()) + " exceeds tolerance " + num(r.tol));
    } else {
        const double margin = r.tau.value - r.upper_bound;
        if (!(margin > r.uncertainty()))
            why.push_back(r.name + ": expected violation of the upper bound is not resolved (margin " + num(margin) +
                          ", uncertainty " + num(r.uncertainty()) + ")");
    }
    return why;
}

inline VerifyOutcome verify_catalog(const VerifyConfig& cfg) {
    VerifyOutcome out;
    for (const auto& f : cfg.functions) {
        out.reports.push_back(verify_bounds(f, cfg.tol, cfg.n_theta, cfg.n_phi, cfg.t_min, cfg.seed));
        for (auto& w : judge(out.reports.back())) out.failures.push_back(std::move(w));
    }
    return out;
}

inline Json to_json(const VerifyOutcome& o, const VerifyConfig& cfg) {
    Json j = header_json("verify", std::to_string(cfg.n_theta) + "x" + std::to_string(cfg.n_phi), cfg.seed);
    j["tol"] = cfg.tol;
    j["pass"] = o.pass();
    j["failures"] = o.failures;
    j["reports"] = Json::array();
    for (const auto& r : o.reports) j["reports"].push_back(to_json(r));
    return j;
}

inline void write_reports_csv(std::ostream& os, const VerifyOutcome& o, const VerifyConfig& cfg) {
    os << "# pshlab " << kVersion << " command=verify grid=" << cfg.n_theta << "x" << cfg.n_phi
       << " tol=" << num(cfg.tol) << " seed=" << cfg.seed << "\n";
    os << kReportHeader << "\n";
    for (const auto& r : o.reports) os << report_row(r) << "\n";
}

// ----------------------------------------------------------------- sweep

/// Catalog name of a family member: demailly, radial, u1, u2, coman-guedj, max-demailly.
inline std::string family_member(const std::string& family, double value) {
    if (family == "demailly") return "demailly-m" + format_param(value);
    if (family == "radial") return "radial-a" + format_param(value);
    if (family == "u1") return "u1-n" + format_param(value);
    if (family == "u2") return "u2-n" + format_param(value);
    if (family == "coman-guedj") return "coman-guedj-n" + format_param(value);
    if (family == "max-demailly") return "max-demailly-m" + format_param(value);
    throw ArgumentError("unknown family: " + family);
}

inline void write_sweep_csv(std::ostream& os, const std::string& family, const std::vector<double>& values,
                            const VerifyOutcome& o, const VerifyConfig& cfg) {
    os << "# pshlab " << kVersion << " command=sweep family=" << family << " grid=" << cfg.n_theta << "x"
       << cfg.n_phi << " seed=" << cfg.seed << "\n";
    os << "family,param," << kReportHeader << "\n";
    for (std::size_t i = 0; i < o.reports.size(); ++i)
        os << family << "," << num(values[i]) << "," << report_row(o.reports[i]) << "\n";
}

// ------------------------------------------------------------ regularize

struct RegularizeConfig {
    std::vector<double> epsilons{0.01, 0.005};
    double A = 2, B = 3;
    double beta = 0.1;           // sharpened variant
    double sharpened_eps = 0.004;
    std::uint64_t seed = 2024;
};

inline Json to_json(const SlopeBoundCheck& c) {
    return Json{{"A", c.A},
                {"B", c.B},
                {"beta", c.beta},
                {"epsilon", c.epsilon},
                {"epsilon0", c.epsilon0},
                {"M_A", c.M_A},
                {"M_B_eps", c.M_B_eps},
                {"C_fit", c.C_fit},
                {"calibration_eps", c.calibration_eps},
                {"calibration_slopes", c.calibration_slopes},
                {"bound", c.bound},
                {"pass", c.pass}};
}

struct RegularizeOutcome {
    MonotonicityCheck monotone;
    std::vector<FriedrichsCheck> friedrichs;
    std::vector<SlopeBoundCheck> slope;
    bool pass() const {
        bool ok = monotone.pass;
        for (const auto& c : friedrichs) ok = ok && c.pass;
        for (const auto& c : slope) ok = ok && c.pass;
        return ok;
    }
};

inline RegularizeOutcome regularize_check(const FunctionSpec& f, const RegularizeConfig& cfg) {
    RegularizeOutcome o;
    o.monotone = check_monotone(f, cfg.epsilons, 100, cfg.seed);
    for (double e : cfg.epsilons) o.friedrichs.push_back(check_friedrichs(f, e, 50, cfg.seed));
    const DirectionGrid g = make_grid(16, 32);
    for (double e : cfg.epsilons)
        if (e < slope_epsilon0(cfg.A, cfg.B)) o.slope.push_back(regularized_slope_bound(f, cfg.A, cfg.B, make_mollifier(e), g));
    o.slope.push_back(regularized_slope_bound(f, cfg.A, cfg.B, make_mollifier(cfg.sharpened_eps), g, cfg.beta));
    return o;
}

inline Json to_json(const RegularizeOutcome& o, const FunctionSpec& f, const RegularizeConfig& cfg) {
    Json j = header_json("regularize-check", "plain 16x32", cfg.seed);
    j["function"] = f.name;
    j["mollifier"] = {{"radial_nodes", 16}, {"hopf_order", hopf_order_for(f)}};
    j["pass"] = o.pass();
    j["monotone"] = {{"epsilons", o.monotone.epsilons}, {"points", o.monotone.points},
                     {"min_excess", o.monotone.min_excess}, {"min_step", o.monotone.min_step},
                     {"pass", o.monotone.pass}};
    j["friedrichs"] = Json::array();
    for (const auto& c : o.friedrichs)
        j["friedrichs"].push_back({{"epsilon", c.epsilon}, {"delta", c.delta}, {"points", c.points},
                                   {"max_gap", c.max_gap}, {"grad_l1", c.grad_l1.value},
                                   {"grad_l1_std_error", c.grad_l1.std_error}, {"bound", c.bound}, {"pass", c.pass}});
    j["slope_bound"] = Json::array();
    for (const auto& c : o.slope) j["slope_bound"].push_back(to_json(c));
    return j;
}

}  // namespace pshlab
