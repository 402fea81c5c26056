#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "csip/core_loop.hpp"

namespace csip {

/// Shared budget of the outer drivers, counted in finite-solver calls.
inline constexpr std::size_t kDefaultSolverCalls = 1'000'000;

/// Oracle tolerance of the post-hoc violation certificate of returned points.
inline constexpr double kPostHocTol = 1e-9;

struct FeasFiniteConfig {
    double eps0 = 1.0;
    double r = 2.0;
    ToleranceSchedule schedule = ToleranceSchedule::geometric(0.1, 0.5);
    double rho = kInf;
    Discretization y0;
    std::size_t max_solver_calls = kDefaultSolverCalls;
    /// Index of the first trace row (lets callers concatenate traces).
    std::size_t k_offset = 0;

    void validate(const SipProblem& problem) const;
};

enum class DriverStatus { Terminated, Budget };

struct FeasFiniteResult {
    DriverStatus status = DriverStatus::Budget;
    Vec x;
    double eps_terminal = 0.0;
    std::size_t k_count = 0;  ///< iterations performed (infeasible checks included)
    std::size_t solver_calls = 0;
    std::uint64_t oracle_evals = 0;
    RunTrace trace;
    Discretization final_points;
};

/// Restriction-feasibility driver: shrinks eps by r while the discretized
/// restriction is infeasible, otherwise runs the adaptive discretization step.
FeasFiniteResult run_feas_finite(const SipProblem& problem, const FeasFiniteConfig& cfg);

/// Smallest m with eps00/r^m <= eps*, L* (diam_x/eps*) eps00/r^m <= delta/2 and
/// obj(m') <= delta/2 for all m' >= m. Throws ConfigError when the schedule
/// never settles below delta/2.
std::size_t compute_termination_index(double delta, const RegularityBundle& regularity, double diam_x, double eps00,
                                      double r, const ToleranceSchedule& obj_schedule);

enum class OutcomeStatus { DeltaApproximate, BudgetExceeded };

const char* to_string(OutcomeStatus s);

struct SolveOutcome {
    OutcomeStatus status = OutcomeStatus::BudgetExceeded;
    Vec x_star;
    double f_value = kInf;
    /// Dense-grid max_i g_i(x_star, y); see outcome_grid_resolution.
    double feasibility_margin = kInf;
    double grid_resolution = 0.0;
    /// Certified upper bound of max_i sup_y g_i(x_star, y) at kPostHocTol.
    double certified_violation = kInf;
    std::size_t outer_iterations = 0;
    std::size_t inner_iterations = 0;
    std::vector<std::size_t> inner_per_level;
    std::size_t solver_calls = 0;
    std::uint64_t oracle_evals = 0;
    double eps_final = 0.0;
    std::size_t m_star = 0;
    /// Last point of the unrestricted stream (simultaneous driver only).
    Vec check_x;
    RunTrace trace;
};

/// Grid spacing used for the post-hoc feasibility margin: 1e-4 per axis,
/// coarsened so that the grid has at most about 1e6 points.
double outcome_grid_resolution(const BoxDomain& y_domain);

/// Fills f_value, feasibility_margin and certified_violation from x_star.
void evaluate_outcome(const SipProblem& problem, SolveOutcome& outcome);

struct SequentialConfig {
    double delta = 1e-2;
    double r = 2.0;
    double eps00 = 1.0;
    /// Derived from the Slater point when absent.
    std::optional<RegularityBundle> regularity;
    ToleranceSchedule schedule = ToleranceSchedule::geometric(0.1, 0.5);
    double rho = kInf;
    Discretization y0;
    /// Start every level from the previous level's final discretization.
    bool warm_start_discretization = true;
    /// Replaces the computed termination index.
    std::optional<std::size_t> m_star;
    std::size_t max_solver_calls = kDefaultSolverCalls;

    void validate() const;
};

SolveOutcome run_sequential(const SipProblem& problem, const SequentialConfig& cfg);

class SimultaneousConfig {
public:
    /// Rejects schedules with sup obj >= delta/2. delta_star defaults to delta/2.
    SimultaneousConfig(double delta, ToleranceSchedule schedule, double eps0 = 1.0, double r = 2.0,
                       double rho = kInf, std::optional<double> delta_star = std::nullopt);

    double delta() const { return delta_; }
    double delta_star() const { return delta_star_; }
    double eps0() const { return eps0_; }
    double r() const { return r_; }
    double rho() const { return rho_; }
    const ToleranceSchedule& schedule() const { return schedule_; }

    Discretization y0_check;
    Discretization y0_hat;
    std::size_t max_solver_calls = kDefaultSolverCalls;

private:
    double delta_;
    ToleranceSchedule schedule_;
    double eps0_;
    double r_;
    double rho_;
    double delta_star_;
};

SolveOutcome run_simultaneous(const SipProblem& problem, const SimultaneousConfig& cfg);

}  // namespace csip
