#include "quadlin/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "quadlin/colehopf.hpp"
#include "quadlin/entropy.hpp"
#include "quadlin/equation.hpp"
#include "quadlin/linearize.hpp"
#include "quadlin/transform.hpp"

namespace quadlin {

using nlohmann::ordered_json;

Tolerances default_tolerances() {
    return {{"check", 1e-7}, {"certify", 1e-6}, {"roundtrip", 1e-6}, {"colehopf", 1e-8},
            {"quadrature", 1e-10}};
}

void set_tolerance(Tolerances& tol, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("--tol expects NAME=VALUE, got '" + assignment + "'");
    const std::string name = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    if (!tol.contains(name)) throw ConfigError("unknown tolerance '" + name + "'");
    double value = 0.0;
    std::size_t used = 0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw ConfigError("tolerance '" + name + "' is not a number");
    if (!(value > 0.0) || !std::isfinite(value))
        throw ConfigError("tolerance '" + name + "' must be strictly positive");
    tol[name] = value;
}

namespace {

std::uint64_t parse_seed(const std::string& text) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ConfigError("seed must be a non-negative integer, got '" + text + "'");
    return v;
}

Command parse_command(const std::string& name) {
    if (name == "check") return Command::check;
    if (name == "transform") return Command::transform;
    if (name == "roundtrip") return Command::roundtrip;
    if (name == "entropy") return Command::entropy;
    if (name == "colehopf") return Command::colehopf;
    throw ConfigError("unknown command '" + name + "'");
}

std::string command_name(Command c) {
    switch (c) {
        case Command::check:
            return "check";
        case Command::transform:
            return "transform";
        case Command::roundtrip:
            return "roundtrip";
        case Command::entropy:
            return "entropy";
        case Command::colehopf:
            return "colehopf";
    }
    return "?";
}

}  // namespace

RunConfig parse_command_line(const std::vector<std::string>& args,
                             const std::optional<std::string>& env_seed) {
    CLI::App app{"quadlin: linearizability analysis of quad equations", "quadlin"};
    std::string command;
    std::string eq_path;
    std::string seed_text;
    std::vector<std::string> tols;
    std::string grid = "20x20";
    int depth = 8;
    std::string out_path;
    std::string format = "json";

    app.add_option("command", command, "check | transform | roundtrip | entropy | colehopf")->required();
    app.add_option("--eq", eq_path, "equation file (family file for colehopf)")->required();
    app.add_option("--seed", seed_text, "random seed (falls back to QUADLIN_SEED, then 1)");
    app.add_option("--tol", tols, "tolerance override NAME=VALUE (repeatable)");
    app.add_option("--grid", grid, "grid size NxM");
    app.add_option("--depth", depth, "iteration depth K for entropy");
    app.add_option("--out", out_path, "write the report here instead of stdout");
    app.add_option("--format", format, "json | csv");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    RunConfig cfg;
    cfg.command = parse_command(command);
    cfg.equation_path = eq_path;
    if (!seed_text.empty())
        cfg.seed = parse_seed(seed_text);
    else if (env_seed && !env_seed->empty())
        cfg.seed = parse_seed(*env_seed);
    for (const auto& t : tols) set_tolerance(cfg.tolerances, t);

    const auto x = grid.find('x');
    if (x == std::string::npos) throw ConfigError("--grid expects NxM, got '" + grid + "'");
    try {
        std::size_t used_n = 0, used_m = 0;
        const long n = std::stol(grid.substr(0, x), &used_n);
        const long m = std::stol(grid.substr(x + 1), &used_m);
        if (used_n != x || used_m != grid.size() - x - 1 || n < 1 || m < 1) throw std::invalid_argument("");
        cfg.n = static_cast<std::size_t>(n);
        cfg.m = static_cast<std::size_t>(m);
    } catch (const std::exception&) {
        throw ConfigError("--grid expects NxM with positive integers, got '" + grid + "'");
    }
    if (depth < 4) throw ConfigError("--depth must be at least 4");
    cfg.depth = depth;
    if (!out_path.empty()) cfg.output = out_path;
    cfg.format = parse_format(format);
    return cfg;
}

// ---------------------------------------------------------------------------

namespace {

std::string read_file(const std::string& path) {
    if (!std::filesystem::exists(path)) throw InputError("file not found: " + path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ordered_json header(const RunConfig& cfg) {
    ordered_json j;
    j["tool"] = "quadlin";
    j["version"] = std::string(kVersion);
    j["command"] = command_name(cfg.command);
    j["seed"] = cfg.seed;
    ordered_json tol = ordered_json::object();
    for (const auto& [name, value] : cfg.tolerances) tol[name] = value;
    j["tolerances"] = tol;
    return j;
}

void merge(ordered_json& into, const ordered_json& from) {
    for (auto it = from.begin(); it != from.end(); ++it) into[it.key()] = it.value();
}

QuadratureTolerance quadrature_tol(const RunConfig& cfg) {
    QuadratureTolerance q;
    q.abs = cfg.tolerances.at("quadrature");
    return q;
}

struct Pipeline {
    LinearizabilityReport report;
    std::optional<PointTransform> psi;
    LinearModel model;
};

Pipeline run_pipeline(const QuadEquation& eq, const RunConfig& cfg) {
    Pipeline p;
    CheckOptions co;
    co.seed = cfg.seed;
    co.tol = cfg.tolerances.at("check");
    p.report = check_conditions(eq, co);
    if (!p.report.passed) return p;
    p.psi.emplace(build_psi(recover_alpha(eq, p.report), quadrature_tol(cfg)));
    FitOptions fo;
    fo.seed = cfg.seed;
    fo.tol = cfg.tolerances.at("certify");
    p.model = fit_linear_model(eq, *p.psi, fo);
    return p;
}

std::string knot_csv(const PointTransform& psi) {
    std::string out = "x,alpha,psi\n";
    const auto values = psi.knot_values();
    for (std::size_t i = 0; i < values.size(); ++i)
        out += format_number(psi.table().x[i]) + "," + format_number(psi.table().alpha[i]) + "," +
               format_number(values[i]) + "\n";
    return out;
}

mpq_class exact_number(const ordered_json& v, const std::string& name) {
    if (v.is_number_integer()) return mpq_class(v.get<long>());
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw InputError("parameter '" + name + "' must be finite");
        return mpq_class(d);
    }
    if (v.is_string()) {
        try {
            mpq_class q(v.get<std::string>(), 10);
            if (q.get_den() != 0) {
                q.canonicalize();
                return q;
            }
        } catch (const std::invalid_argument&) {
        }
    }
    throw InputError("parameter '" + name + "' must be a number or a \"p/q\" string");
}

double real_number(const ordered_json& doc, const std::string& name) {
    if (!doc.contains(name)) throw InputError("family file needs \"" + name + "\"");
    return exact_number(doc[name], name).get_d();
}

RunResult run_colehopf(const RunConfig& cfg, ordered_json report) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(read_file(cfg.equation_path));
    } catch (const ordered_json::parse_error& e) {
        throw InputError(std::string("family file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("family") || !doc["family"].is_string())
        throw InputError("family file needs a string \"family\"");
    const std::string family = doc["family"].get<std::string>();
    const double tol = cfg.tolerances.at("colehopf");

    static const std::map<std::string, std::vector<std::string>> keys{
        {"g8", {"p"}},
        {"g23", {"kappa0", "kappa1", "kappa2"}},
        {"canonical", {}},
        {"rosa", {"e1", "e2", "o1", "o2", "kappa0"}}};
    const auto known = keys.find(family);
    if (known == keys.end()) throw InputError("unknown family '" + family + "'");
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (it.key() != "family" &&
            std::find(known->second.begin(), known->second.end(), it.key()) == known->second.end())
            throw InputError("unknown key '" + it.key() + "' for family " + family);
    report["equation"] = doc;

    Grid u;
    ordered_json extra = ordered_json::object();
    double residual = 0.0;
    bool passed = true;
    if (family == "g8") {
        const double p = real_number(doc, "p");
        const Grid psi = evolve_linear_burgers(p, log_uniform_staircase(cfg.n, cfg.m + 1, cfg.seed));
        u = cole_hopf_map(psi);
        residual = verify_burgers(u, BurgersFamily::classical(p));
        extra["potential_mismatch"] = verify_potential_compatibility(u, BurgersFamily::classical(p));
    } else if (family == "g23") {
        const auto f = BurgersFamily::generalized(real_number(doc, "kappa0"), real_number(doc, "kappa1"),
                                                  real_number(doc, "kappa2"));
        u = evolve_generalized_burgers(f, make_staircase(cfg.n, cfg.m, SeededStaircase{cfg.seed, 0.5, 2.0}));
        residual = verify_burgers(u, f);
        extra["potential_mismatch"] = verify_potential_compatibility(u, f);
    } else if (family == "canonical") {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> dist(0.5, 2.0);
        std::vector<double> row(cfg.n + cfg.m + 1);
        for (double& v : row) v = dist(rng);
        u = evolve_canonical(row, cfg.m);
        residual = verify_canonical_form(u);
    } else {
        for (const char* k : {"e1", "e2", "o1", "o2", "kappa0"})
            if (!doc.contains(k)) throw InputError(std::string("family file needs \"") + k + "\"");
        const HietarintaParams hp{exact_number(doc["e1"], "e1"), exact_number(doc["e2"], "e2"),
                                  exact_number(doc["o1"], "o1"), exact_number(doc["o2"], "o2")};
        const mpq_class kappa0 = exact_number(doc["kappa0"], "kappa0");
        const Grid ut = evolve_rosa(hp, make_staircase(cfg.n, cfg.m, SeededStaircase{cfg.seed, 0.5, 1.5}));
        const HietarintaResult hr = hietarinta_transform(hp, kappa0, ut);
        u = hr.u;
        residual = verify_burgers(u, hr.family);
        const double source = rosa_residual(ut, hp);
        extra["rosa_residual"] = source;
        extra["cross_ratio"] = format_decimal(hr.cross_ratio);
        extra["kappa0"] = format_decimal(hr.kappa0);
        extra["kappa1"] = "1";
        extra["kappa2"] = format_decimal(hr.kappa2);
        passed = source <= tol;
    }

    merge(report, colehopf_verdict(family, residual, tol));
    passed = passed && report["passed"].get<bool>();
    report["passed"] = passed;
    merge(report, extra);
    report["grid"] = {{"n", u.n()}, {"m", u.m()}};
    return {passed ? 0 : 1, emit_report(report, cfg.format, grid_to_csv(u))};
}

}  // namespace

std::string emit_report(const ordered_json& report, ReportFormat format,
                        const std::optional<std::string>& csv_table) {
    if (format == ReportFormat::json) return to_json_bytes(report);
    if (!csv_table) throw UnsupportedFormat("this report has no tabular form; use json");
    return *csv_table;
}

RunResult run(const RunConfig& cfg) {
    ordered_json report = header(cfg);
    if (cfg.command == Command::colehopf) return run_colehopf(cfg, std::move(report));

    const QuadEquation eq = QuadEquation::from_json_text(read_file(cfg.equation_path));
    report["equation"] = eq.rhs().to_string();

    switch (cfg.command) {
        case Command::check: {
            CheckOptions co;
            co.seed = cfg.seed;
            co.tol = cfg.tolerances.at("check");
            const LinearizabilityReport r = check_conditions(eq, co);
            merge(report, to_json(r));
            return {r.passed ? 0 : 1, emit_report(report, cfg.format)};
        }
        case Command::transform:
        case Command::roundtrip: {
            const Pipeline p = run_pipeline(eq, cfg);
            report["linearizability"] = to_json(p.report);
            if (!p.psi) {
                report["certified"] = false;
                return {1, emit_report(report, cfg.format)};
            }
            merge(report, to_json(*p.psi, p.model));
            report["certified"] = p.model.certified;
            if (cfg.command == Command::transform || !p.model.certified)
                return {p.model.certified ? 0 : 1, emit_report(report, cfg.format, knot_csv(*p.psi))};

            const Roundtrip rt = roundtrip_verify(eq, *p.psi, p.model, cfg.n, cfg.m, cfg.seed);
            const bool ok = rt.discrepancy <= cfg.tolerances.at("roundtrip");
            report["roundtrip"] = {{"n", cfg.n}, {"m", cfg.m}, {"discrepancy", rt.discrepancy},
                                   {"passed", ok}, {"mapped", grid_to_json(rt.mapped)}};
            return {ok ? 0 : 1, emit_report(report, cfg.format, grid_to_csv(rt.mapped))};
        }
        case Command::entropy: {
            const DegreeSequence seq = degree_sequence(eq, cfg.depth, cfg.seed);
            report["depth"] = cfg.depth;
            merge(report, to_json(seq));
            const bool ok = seq.growth == Growth::constant || seq.growth == Growth::linear;
            return {ok ? 0 : 1, emit_report(report, cfg.format, to_csv(seq))};
        }
        case Command::colehopf:
            break;
    }
    return {2, {}};
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const InputError*>(&e)) return 2;
    if (dynamic_cast<const CertificationFailure*>(&e)) return 1;
    return 3;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             const std::optional<std::string>& env_seed) {
    RunConfig cfg;
    try {
        cfg = parse_command_line(args, env_seed);
    } catch (const CLI::CallForHelp&) {
        out << "usage: quadlin COMMAND --eq PATH [--seed N] [--tol NAME=VALUE]... [--grid NxM]\n"
               "               [--depth K] [--out PATH] [--format json|csv]\n"
               "commands: check, transform, roundtrip, entropy, colehopf\n"
               "tolerances: check, certify, roundtrip, colehopf, quadrature\n";
        return 0;
    } catch (const std::exception& e) {
        err << "quadlin: " << e.what() << "\n";
        return 2;
    }

    RunResult result;
    try {
        result = run(cfg);
    } catch (const std::exception& e) {
        err << "quadlin: " << e.what() << "\n";
        return exit_code_for(e);
    }

    if (cfg.output) {
        std::ofstream file(*cfg.output, std::ios::binary);
        if (!file) {
            err << "quadlin: cannot write " << *cfg.output << "\n";
            return 2;
        }
        file << result.bytes;
    } else {
        out << result.bytes;
    }
    return result.exit_code;
}

}  // namespace quadlin
