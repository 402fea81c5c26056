#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "csip/drivers.hpp"
#include "csip/regression.hpp"

namespace csip::io {

using Json = nlohmann::json;

/// "builtin:instance_A", "builtin:instance_B", "builtin:instance_R",
/// "builtin:quasi_convex", or a path to a problem JSON file.
SipProblem load_problem(const std::string& source);

/// Builds a problem from a parsed document ("type": "sip" or "regression").
/// base_dir resolves relative "data_csv" paths.
SipProblem problem_from_json(const Json& doc, const std::string& base_dir = ".");

RegressionSpec regression_from_json(const Json& doc, const std::string& base_dir = ".");

/// Rows of d input columns followed by the target; an optional header line
/// is skipped when its first field is not numeric.
std::vector<Observation> read_observations_csv(const std::string& path, std::size_t input_dim);

/// "type": "sip" document. Requires a quadratic objective and constraint
/// families with polynomial structure.
Json serialize(const SipProblem& problem);

enum class Algorithm { Core, Sequential, Simultaneous };

Algorithm parse_algorithm(const std::string& name);

struct RunConfig {
    Algorithm algorithm = Algorithm::Sequential;
    double delta = 1e-2;
    double rho = kInf;
    double r = 2.0;
    double eps0 = 1.0;
    std::string schedule = "geometric(0.5)";
    /// Finite-solver calls for the outer drivers, iterations for the core loop.
    std::size_t max_iters = kDefaultSolverCalls;
    std::optional<std::string> trace_out;
    std::optional<std::string> outcome_out;
};

struct RunReport {
    int exit_code = 1;
    std::string status;
    SolveOutcome outcome;
    Json outcome_json;
};

/// Objective tolerances of a preset scale with delta: obj(0) = delta/4.
ToleranceSchedule schedule_for(const RunConfig& cfg);

/// Runs the selected algorithm from the center of Y and writes the
/// requested artifacts. Exit code 0 on success, 2 when the run stopped short.
RunReport run(const RunConfig& cfg, const SipProblem& problem);

Json outcome_to_json(const std::string& status, const SolveOutcome& outcome);

/// Discretization sizes of the zero-restriction core loop with rho = 0 and
/// rho = inf per iteration, and the size of the coarsest uniform grid whose
/// solution satisfies the constraints to within tol.
void write_bench(const SipProblem& problem, std::size_t iterations, double tol, std::ostream& out);

}  // namespace csip::io
