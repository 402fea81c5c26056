#pragma once

#include <cstddef>
#include <vector>

#include "csip/types.hpp"

namespace csip::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(Status s);

/// min cost'lambda  s.t.  M lambda = rhs, lambda >= 0   (M is rows x cols, row-major)
struct StandardForm {
    std::vector<Vec> M;
    Vec rhs;
    Vec cost;
};

struct StandardResult {
    Status status = Status::IterationLimit;
    Vec primal;     ///< lambda
    Vec duals;      ///< simplex multipliers pi with cost_j - pi'M_j >= 0 at optimality
    double objective = 0.0;
    std::size_t pivots = 0;
};

struct Options {
    std::size_t max_pivots = 200'000;
    double pivot_tol = 1e-11;
    double optimality_tol = 1e-13;
    double feasibility_tol = 1e-9;
};

/// Dense two-phase tableau simplex with Bland's rule (smallest-index entering
/// and leaving choices), which never cycles.
StandardResult solve_standard(const StandardForm& problem, const Options& options = {});

/// min c'v  s.t.  A v <= b with v free. Solved through its dual
/// min b'lambda s.t. A'lambda = -c, lambda >= 0, whose multipliers are v.
struct InequalityResult {
    Status status = Status::IterationLimit;  ///< Infeasible: no v satisfies A v <= b
    Vec v;
    /// Nonnegative row multipliers (A' lambda = -c at optimality).
    Vec multipliers;
    double objective = 0.0;
    std::size_t pivots = 0;
};

InequalityResult solve_inequality(const Vec& c, const std::vector<Vec>& A, const Vec& b, const Options& options = {});

}  // namespace csip::lp
