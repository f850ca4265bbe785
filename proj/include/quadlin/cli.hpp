#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "quadlin/report.hpp"

namespace quadlin {

enum class Command { check, transform, roundtrip, entropy, colehopf };

/// Tolerances by name with their defaults: check 1e-7, certify 1e-6,
/// roundtrip 1e-6, colehopf 1e-8, quadrature 1e-10.
using Tolerances = std::map<std::string, double>;
Tolerances default_tolerances();

struct RunConfig {
    Command command = Command::check;
    std::string equation_path;
    std::uint64_t seed = 1;
    Tolerances tolerances = default_tolerances();
    std::optional<std::string> output;
    std::size_t n = 20;
    std::size_t m = 20;
    int depth = 8;
    ReportFormat format = ReportFormat::json;
};

/// Applies "NAME=VALUE"; throws ConfigError for unknown names or values that
/// are not strictly positive.
void set_tolerance(Tolerances& tol, const std::string& assignment);

/// Parses the command line (args exclude the program name). `env_seed` is the
/// QUADLIN_SEED fallback. Throws ConfigError on bad usage.
RunConfig parse_command_line(const std::vector<std::string>& args,
                             const std::optional<std::string>& env_seed);

struct RunResult {
    int exit_code = 0;
    std::string bytes;
};

/// Exit codes: 0 pass, 1 analysis done but not linearizable or certified,
/// 2 usage or input error, 3 numerical failure. Errors propagate as
/// exceptions; run_guarded maps them.
RunResult run(const RunConfig& config);

/// emit_report for any module result already converted to JSON. Tables are
/// handed in pre-rendered for CSV.
std::string emit_report(const nlohmann::ordered_json& report, ReportFormat format,
                        const std::optional<std::string>& csv_table = std::nullopt);

/// Full front end: parse, run, write the report to `out` or --out, and
/// diagnostics to `err`. Returns the exit code.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             const std::optional<std::string>& env_seed = std::nullopt);

int exit_code_for(const std::exception& e);

}  // namespace quadlin
