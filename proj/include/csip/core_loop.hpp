#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "csip/discretization.hpp"
#include "csip/finite_solver.hpp"
#include "csip/lower_level.hpp"
#include "csip/schedule.hpp"

namespace csip {

struct TraceRow {
    std::size_t k = 0;
    double eps = 0.0;
    std::size_t card_y = 0;
    double f_x = 0.0;
    double max_violation = 0.0;
    std::string branch;
    std::size_t lp_iters = 0;
    std::uint64_t oracle_evals = 0;  ///< cumulative
};

/// Append-only per-iteration log; k must be strictly increasing.
class RunTrace {
public:
    void append(TraceRow row);
    void extend(const RunTrace& other);
    const std::vector<TraceRow>& rows() const { return rows_; }
    bool empty() const { return rows_.empty(); }

    /// Columns: k,eps,card_Y,f_x,max_violation,branch,lp_iters,oracle_evals.
    void write_csv(std::ostream& out) const;

private:
    std::vector<TraceRow> rows_;
};

struct CoreConfig {
    double eps = 0.0;
    /// Pruning radius; kInf keeps every point.
    double rho = kInf;
    ToleranceSchedule schedule = ToleranceSchedule::eventually_zero(0);
    Discretization y0;
    /// Additional uniformly sampled points joining the strongest violator.
    std::size_t extra_violators = 0;
    std::size_t max_iters = 10'000;

    void validate(const SipProblem& problem) const;
};

/// Lower-level results of one iteration at a point x.
struct AuxRound {
    std::map<int, CertifiedMax> results;
    int violator_index = 0;
    CertifiedMax violator;
    /// g_i(x, y^{k,i}) <= -delta_{k,i} for every i.
    bool all_satisfied = false;
    std::uint64_t evaluations = 0;
};

AuxRound run_aux_round(const SipProblem& problem, std::span<const double> x, std::size_t k,
                       const ToleranceSchedule& schedule);

/// Y^{k+1} = {y in Y^k : max_i g_i(x^k, y) >= -eps - rho} u {violator} u extra points
/// u {y_j in Y^k : binding[j]}.
Discretization update_discretization(const SipProblem& problem, const Discretization& yk, std::span<const double> xk,
                                     double eps, double rho, const CertifiedMax& violator, std::size_t extra = 0,
                                     std::uint64_t seed = 0, const std::vector<bool>& binding = {});

enum class CoreStatus { Terminated, InfeasibleSubproblem, Budget };

const char* to_string(CoreStatus s);

struct CoreResult {
    CoreStatus status = CoreStatus::Budget;
    Vec x;             ///< last iterate (terminal point when Terminated)
    std::size_t k = 0; ///< index of the last iteration
    RunTrace trace;
    Discretization final_points;
    std::vector<Vec> iterates;
    std::uint64_t oracle_evals = 0;
};

/// Adaptive discretization at a fixed restriction parameter.
CoreResult run_core(const SipProblem& problem, const CoreConfig& cfg);

}  // namespace csip
