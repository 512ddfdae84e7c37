// pshlab command-line front end.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "pshlab/report.hpp"

namespace {

using namespace pshlab;

struct GridSize {
    int n_theta = 64, n_phi = 128;
    std::string text() const { return std::to_string(n_theta) + "x" + std::to_string(n_phi); }
};

GridSize parse_grid(const std::string& s) {
    const auto x = s.find('x');
    if (x == std::string::npos) throw ArgumentError("--grid expects NxM, got " + s);
    try {
        return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
    } catch (const std::exception&) {
        throw ArgumentError("--grid expects NxM, got " + s);
    }
}

/// A catalog name, or a spec file holding one or more definitions.
std::vector<FunctionSpec> resolve(const std::string& arg) {
    if (std::filesystem::is_regular_file(arg)) return load_spec_file(arg);
    return {builtin(arg)};
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot write " + path);
    out << text;
}

struct Common {
    std::string grid = "64x128";
    std::string out;
    std::string format = "json";
    std::uint64_t seed = 12345;
    double tol = 1e-3;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--grid", c.grid, "direction grid NxM")->capture_default_str();
    cmd->add_option("--out", c.out, "output path");
    cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
    cmd->add_option("--tol", c.tol, "tolerance for verdicts")->capture_default_str();
}

// ------------------------------------------------------------------ analyze

struct AnalyzeArgs {
    std::string function;
    double t_min = -20, t_max = -1, t_step = 0.5;
    bool t_min_given = false;
};

int run_analyze(const AnalyzeArgs& a, const Common& c, bool csv_only, bool json_only) {
    const GridSize gs = parse_grid(c.grid);
    const std::string dir = c.out.empty() ? "." : c.out;
    std::filesystem::create_directories(dir);
    for (const auto& f : resolve(a.function)) {
        const MassReport rep = verify_bounds(f, c.tol, gs.n_theta, gs.n_phi,
                                             a.t_min_given ? std::optional<double>(a.t_min) : std::nullopt, c.seed);
        Json j = header_json("analyze", gs.text(), c.seed);
        j["function"] = f.describe();
        j["report"] = to_json(rep);
        const bool traced = !rep.skipped && rep.s1.invariant;
        if (traced && !json_only) {
            const double t_lo = std::max(a.t_min, default_depth(f));
            const DirectionGrid g = make_adapted_grid(f, t_lo, gs.n_theta, gs.n_phi);
            const RayTrace tr = trace(f, t_range(t_lo, a.t_max, a.t_step), g);
            std::ostringstream csv;
            write_trace_csv(csv, tr, g.describe(), c.seed);
            emit(dir + "/" + f.name + ".csv", csv.str());
            j["trace"] = {{"file", f.name + ".csv"}, {"t_min", t_lo}, {"t_max", a.t_max}, {"t_step", a.t_step},
                          {"grid", g.describe()}};
        } else if (!traced) {
            j["trace"] = {{"note", "not traced: fiber functionals need an S^1-invariant C^2 function"}};
        }
        if (!csv_only) emit(dir + "/" + f.name + ".json", j.dump(2) + "\n");
        std::cout << f.name << ": nu=" << num(rep.nu.value) << " lambda=" << num(rep.lambda.value)
                  << " tau=" << num(rep.tau.value) << (rep.note.empty() ? "" : "  (" + rep.note + ")") << "\n";
    }
    return 0;
}

// ------------------------------------------------------------------- verify

void print_table(const VerifyOutcome& o) {
    for (const auto& r : o.reports) {
        if (r.skipped) {
            std::cout << r.name << "  " << r.note << "\n";
            continue;
        }
        std::cout << r.name << "  nu=" << num(r.nu.value) << " lambda=" << num(r.lambda.value)
                  << " tau=" << num(r.tau.value) << " [" << num(r.lower_bound) << ", " << num(r.upper_bound) << "]"
                  << " lower=" << (r.verdict_lower ? "ok" : "FAIL") << " upper=" << (r.verdict_upper ? "ok" : "FAIL")
                  << (r.note.empty() ? "" : "  " + r.note) << "\n";
    }
}

int finish_verify(const VerifyOutcome& o, const VerifyConfig& cfg, const Common& c, const std::string& csv_text) {
    print_table(o);
    if (!c.out.empty()) emit(c.out, c.format == "csv" ? csv_text : to_json(o, cfg).dump(2) + "\n");
    if (!o.pass()) {
        std::cerr << "verify failed (tolerance " << num(cfg.tol) << "):\n";
        for (const auto& w : o.failures) std::cerr << "  " << w << "\n";
        return 1;
    }
    std::cout << "verify passed (tolerance " << num(cfg.tol) << ")\n";
    return 0;
}

VerifyConfig verify_config(const Common& c, std::optional<double> t_min) {
    const GridSize gs = parse_grid(c.grid);
    VerifyConfig cfg;
    cfg.tol = c.tol;
    cfg.n_theta = gs.n_theta;
    cfg.n_phi = gs.n_phi;
    cfg.t_min = t_min;
    cfg.seed = c.seed;
    return cfg;
}

int run_verify(const std::vector<std::string>& names, const std::vector<std::string>& exclude, const Common& c,
               std::optional<double> t_min) {
    VerifyConfig cfg = verify_config(c, t_min);
    for (const auto& n : names.empty() ? catalog_names() : names) {
        if (std::find(exclude.begin(), exclude.end(), n) != exclude.end()) continue;
        for (auto& f : resolve(n)) cfg.functions.push_back(std::move(f));
    }
    const VerifyOutcome o = verify_catalog(cfg);
    std::ostringstream csv;
    write_reports_csv(csv, o, cfg);
    return finish_verify(o, cfg, c, csv.str());
}

// -------------------------------------------------------------------- sweep

int run_sweep(const std::string& family, const std::vector<double>& values, const Common& c,
              std::optional<double> t_min) {
    VerifyConfig cfg = verify_config(c, t_min);
    for (double v : values) cfg.functions.push_back(builtin(family_member(family, v)));
    const VerifyOutcome o = verify_catalog(cfg);
    std::ostringstream csv;
    write_sweep_csv(csv, family, values, o, cfg);
    emit(c.out, csv.str());
    return 0;
}

// --------------------------------------------------------- regularize-check

int run_regularize(const std::string& name, const std::vector<double>& eps, const Common& c, bool seed_given) {
    int code = 0;
    for (const auto& f : resolve(name)) {
        RegularizeConfig cfg;
        cfg.epsilons = eps;
        if (seed_given) cfg.seed = c.seed;
        const RegularizeOutcome o = regularize_check(f, cfg);
        emit(c.out, to_json(o, f, cfg).dump(2) + "\n");
        if (!o.pass()) code = 1;
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pshlab: residual Monge-Ampere mass, Lelong numbers and fiber functionals"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    Common ca, cv, cs, cr;
    AnalyzeArgs aa;
    auto* analyze = app.add_subcommand("analyze", "trace the functionals and report nu, lambda, tau");
    analyze->add_option("function", aa.function, "catalog name or spec file")->required();
    add_common(analyze, ca);
    auto* tmin_opt = analyze->add_option("--t-min", aa.t_min, "deepest t")->capture_default_str();
    analyze->add_option("--t-max", aa.t_max, "shallowest t of the trace")->capture_default_str();
    analyze->add_option("--t-step", aa.t_step, "trace step")->capture_default_str();
    analyze->get_option("--format")->default_str("");
    ca.format.clear();
    analyze->get_option("--out")->description("output directory (default .)");

    std::vector<std::string> vnames, vexclude;
    double v_tmin = 0;
    auto* verify = app.add_subcommand("verify", "check nu^2 <= tau <= 2 lambda nu + nu^2 over the catalog");
    verify->add_option("functions", vnames, "catalog names or spec files (default: whole catalog)");
    verify->add_option("--exclude", vexclude, "names to leave out");
    auto* vtmin_opt = verify->add_option("--t-min", v_tmin, "deepest t of the schedules");
    add_common(verify, cv);

    std::string family;
    std::vector<double> values;
    double s_tmin = 0;
    auto* sweep = app.add_subcommand("sweep", "one report row per family parameter");
    sweep->add_option("--family", family, "demailly, radial, u1, u2, coman-guedj, max-demailly")->required();
    sweep->add_option("--values", values, "parameter values")->delimiter(',')->required();
    auto* stmin_opt = sweep->add_option("--t-min", s_tmin, "deepest t of the schedules");
    add_common(sweep, cs);

    std::string rname;
    std::vector<double> eps{0.01, 0.005};
    auto* reg = app.add_subcommand("regularize-check", "mollification checks");
    reg->add_option("function", rname, "catalog name or spec file")->required();
    reg->add_option("--eps", eps, "mollifier radii")->delimiter(',')->capture_default_str();
    add_common(reg, cr);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze) {
            aa.t_min_given = tmin_opt->count() > 0;
            return run_analyze(aa, ca, ca.format == "csv", ca.format == "json");
        }
        if (*verify) return run_verify(vnames, vexclude, cv, vtmin_opt->count() ? std::optional(v_tmin) : std::nullopt);
        if (*sweep) return run_sweep(family, values, cs, stmin_opt->count() ? std::optional(s_tmin) : std::nullopt);
        if (*reg) return run_regularize(rname, eps, cr, reg->get_option("--seed")->count() > 0);
    } catch (const UnknownFunctionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
