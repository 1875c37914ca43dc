#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

namespace serimat {

enum class Command { check, diagonalize, realform, svd, pullback, verify };

Command parse_command(const std::string& name);
std::string command_name(Command c);

// A fully assembled batch job: the parsed input file plus command flags and
// any backend overrides coming from the CLI or the environment.
struct JobSpec {
    Command command = Command::check;
    nlohmann::json input; // {"format", "variables", "truncation", "backend", "matrix"}
    bool refine = false;
    bool real = false;
    bool hypothesis_gate = false;
    std::map<std::string, std::string> chart_map; // pullback: variable -> monomial
    std::optional<std::string> backend_override;  // "exact" | "float"
    std::optional<unsigned> precision_bits;
    std::optional<std::string> tolerance;
    std::optional<unsigned> truncation_override;
};

// Executes the job, writing the JSON report to `out` and diagnostics to
// `diag`. Returns the process exit code: 0 on success, otherwise the error
// class of the failure. A failing hypothesis in `check` exits with the
// hypothesis code while still writing the full report.
int run_job(const JobSpec& job, std::ostream& out, std::ostream& diag);

// Recomputes every residual of a result bundle from scratch, independently
// of the code path that produced it.
int verify_bundle(const nlohmann::json& bundle, std::ostream& out, std::ostream& diag);

} // namespace serimat
