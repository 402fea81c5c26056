#pragma once

#include <cstdint>
#include <optional>

#include "csip/discretization.hpp"
#include "csip/problem.hpp"

namespace csip {

/// SIP_{-eps}(Y*): min f(x) over X s.t. g_i(x, y) <= -eps for y in points.
struct DiscretizedProblem {
    const SipProblem* base = nullptr;
    double eps = 0.0;
    Discretization points;

    void validate() const;
};

enum class SolveStatus { Feasible, Infeasible, Undecided };

const char* to_string(SolveStatus s);

/// Smallest relative optimality gap ever requested from the finite solver.
inline constexpr double kGapFloor = 1e-12;

struct DiscretizedSolveResult {
    SolveStatus status = SolveStatus::Undecided;
    Vec x;                 ///< best feasible point (Feasible, or Undecided when one was found)
    double upper = kInf;   ///< f(x)
    double lower = -kInf;  ///< certified lower bound on the optimal value
    double gap_request = 0.0;
    double gap_target = 0.0;  ///< gap actually enforced (request raised to the floor)
    /// Per discretization point: some cut of it binds in the certifying model (Feasible only).
    std::vector<bool> active_points;
    std::size_t iterations = 0;
    std::size_t lp_pivots = 0;
    std::uint64_t evaluations = 0;
};

struct FiniteSolverOptions {
    std::size_t max_iterations = 20'000;
    /// Optional initial trial point (clamped into X).
    std::optional<Vec> warm_start;
    /// Use the linear epigraph model even for positive definite quadratic objectives.
    bool force_lp_master = false;
};

/// Cutting-plane solve of the discretized restriction with certified bounds.
/// Positive definite quadratic objectives are kept exact in a QP master
/// problem; other objectives use a stabilized linear epigraph model.
DiscretizedSolveResult solve_discretized(const DiscretizedProblem& dp, double delta_bar,
                                         const FiniteSolverOptions& options = {});

/// Feasible iff min over X of max_{i,j} (g_i(x, y_j) + eps) <= 0 (to kFeasTol).
/// Returns Infeasible when this cannot be established within the budget.
SolveStatus check_feasibility(const DiscretizedProblem& dp, const FiniteSolverOptions& options = {});

}  // namespace csip
