#include "csip/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace csip {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kIndexHorizon = 100'000;
constexpr double kMaxGridPoints = 1e6;

void check_restriction_inputs(double eps0, double r, double rho, const ToleranceSchedule& schedule,
                              const char* who) {
    const std::string w(who);
    if (!(eps0 > 0.0) || !std::isfinite(eps0)) throw ConfigError(w + ": eps0 must be finite and > 0");
    if (!(r > 1.0) || !std::isfinite(r)) throw ConfigError(w + ": r must be finite and > 1");
    if (!(rho >= 0.0)) throw ConfigError(w + ": rho must be >= 0 or infinite");
    schedule.validate();
    if (schedule.regime() == Regime::Summable && rho == 0.0)
        throw ConfigError(w + ": a summable objective schedule requires rho != 0");
}

void check_points(const SipProblem& problem, const Discretization& d) {
    for (const auto& y : d.points()) require_dim(y, problem.y_dim(), "initial discretization point");
    d.check_within(problem.y_domain());
}

}  // namespace

void evaluate_outcome(const SipProblem& problem, SolveOutcome& out) {
    if (out.x_star.empty()) {
        out.f_value = kNaN;
        out.feasibility_margin = kNaN;
        out.certified_violation = kNaN;
        return;
    }
    out.f_value = problem.objective().value(out.x_star);
    out.grid_resolution = outcome_grid_resolution(problem.y_domain());
    out.feasibility_margin = feasibility_margin(problem, out.x_star, out.grid_resolution);
    try {
        out.certified_violation = certified_violation_bound(problem, out.x_star, kPostHocTol);
    } catch (const BudgetExhausted&) {
        out.certified_violation = kNaN;
    }
}

void FeasFiniteConfig::validate(const SipProblem& problem) const {
    check_restriction_inputs(eps0, r, rho, schedule, "feas_finite");
    check_points(problem, y0);
    if (max_solver_calls == 0) throw ConfigError("feas_finite: solver budget must be positive");
}

FeasFiniteResult run_feas_finite(const SipProblem& problem, const FeasFiniteConfig& cfg) {
    cfg.validate(problem);
    FeasFiniteResult out;
    double eps = cfg.eps0;
    Discretization Y = cfg.y0;
    std::optional<Vec> warm;

    auto finish = [&](DriverStatus s, std::size_t k) {
        out.status = s;
        out.eps_terminal = eps;
        out.k_count = k;
        out.final_points = Y;
        return out;
    };

    for (std::size_t k = 0;; ++k) {
        TraceRow row{cfg.k_offset + k, eps, Y.size(), kInf, kNaN, "", 0, 0};
        if (out.solver_calls >= cfg.max_solver_calls) return finish(DriverStatus::Budget, k);
        try {
            DiscretizedProblem dp{&problem, eps, Y};
            FiniteSolverOptions opts;
            opts.warm_start = warm;
            const auto sol = solve_discretized(dp, cfg.schedule.obj(k), opts);
            ++out.solver_calls;
            out.oracle_evals += sol.evaluations;
            row.lp_iters = sol.lp_pivots;
            if (sol.status == SolveStatus::Infeasible) {
                row.branch = "infeasible";
                row.oracle_evals = out.oracle_evals;
                out.trace.append(row);
                eps /= cfg.r;
                continue;
            }
            if (sol.status == SolveStatus::Undecided) {
                row.branch = "budget";
                row.oracle_evals = out.oracle_evals;
                out.trace.append(row);
                return finish(DriverStatus::Budget, k + 1);
            }
            out.x = sol.x;
            warm = sol.x;
            row.f_x = sol.upper;
            const AuxRound aux = run_aux_round(problem, out.x, k, cfg.schedule);
            out.oracle_evals += aux.evaluations;
            row.max_violation = aux.violator.value;
            row.oracle_evals = out.oracle_evals;
            if (aux.all_satisfied) {
                row.branch = "terminate";
                out.trace.append(row);
                return finish(DriverStatus::Terminated, k + 1);
            }
            Y = update_discretization(problem, Y, out.x, eps, cfg.rho, aux.violator, 0, 0, sol.active_points);
            row.branch = "refine";
            out.trace.append(row);
        } catch (const BudgetExhausted&) {
            row.branch = "budget";
            row.oracle_evals = out.oracle_evals;
            out.trace.append(row);
            return finish(DriverStatus::Budget, k + 1);
        }
    }
}

std::size_t compute_termination_index(double delta, const RegularityBundle& regularity, double diam_x, double eps00,
                                      double r, const ToleranceSchedule& obj_schedule) {
    if (!(delta > 0.0)) throw ConfigError("termination index: delta must be > 0");
    if (!(regularity.eps_star > 0.0) || !(regularity.lipschitz_f > 0.0))
        throw ConfigError("termination index: eps* and L* must be > 0");
    if (!(diam_x >= 0.0)) throw ConfigError("termination index: diam X must be >= 0");
    if (!(eps00 > 0.0)) throw ConfigError("termination index: eps00 must be > 0");
    if (!(r > 1.0)) throw ConfigError("termination index: r must be > 1");

    const double half = delta / 2.0;
    // Last index below the horizon where the objective tolerance exceeds delta/2.
    std::size_t settle = 0;
    for (std::size_t m = 0; m < kIndexHorizon; ++m) {
        if (obj_schedule.obj(m) > half) settle = m + 1;
    }
    if (settle >= kIndexHorizon)
        throw ConfigError("termination index: objective tolerances never drop to delta/2");

    const double L = regularity.lipschitz_f;
    const double es = regularity.eps_star;
    std::size_t m = 0;
    double e = eps00;
    while (!(e <= es && L * (diam_x / es) * e <= half)) {
        e /= r;
        ++m;
    }
    return std::max(m, settle);
}

const char* to_string(OutcomeStatus s) {
    switch (s) {
        case OutcomeStatus::DeltaApproximate: return "DeltaApproximate";
        case OutcomeStatus::BudgetExceeded: return "BudgetExceeded";
    }
    return "unknown";
}

double outcome_grid_resolution(const BoxDomain& y_domain) {
    std::size_t q = 0;
    double widest = 0.0;
    for (std::size_t j = 0; j < y_domain.dim(); ++j) {
        if (y_domain.width(j) > 0.0) {
            ++q;
            widest = std::max(widest, y_domain.width(j));
        }
    }
    double res = 1e-4;
    if (q > 0) {
        const double per_axis = std::pow(kMaxGridPoints, 1.0 / static_cast<double>(q)) - 1.0;
        res = std::max(res, widest / per_axis);
    }
    return res;
}

void SequentialConfig::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("sequential: delta must be finite and > 0");
    check_restriction_inputs(eps00, r, rho, schedule, "sequential");
    if (max_solver_calls == 0) throw ConfigError("sequential: solver budget must be positive");
}

SolveOutcome run_sequential(const SipProblem& problem, const SequentialConfig& cfg) {
    cfg.validate();
    check_points(problem, cfg.y0);
    SolveOutcome out;
    if (cfg.m_star) {
        out.m_star = *cfg.m_star;
    } else {
        const RegularityBundle reg = cfg.regularity ? *cfg.regularity : derive_regularity(problem, kPostHocTol);
        out.m_star = compute_termination_index(cfg.delta, reg, problem.x_domain().diameter(), cfg.eps00, cfg.r,
                                               cfg.schedule);
    }

    double eps = cfg.eps00;
    Discretization Y = cfg.y0;
    out.status = OutcomeStatus::DeltaApproximate;
    for (std::size_t m = 0; m <= out.m_star; ++m) {
        FeasFiniteConfig fc;
        fc.eps0 = eps;
        fc.r = cfg.r;
        fc.schedule = cfg.schedule.shifted(m);
        fc.rho = cfg.rho;
        fc.y0 = Y;
        fc.max_solver_calls = cfg.max_solver_calls - out.solver_calls;
        fc.k_offset = out.inner_iterations;
        const FeasFiniteResult res = run_feas_finite(problem, fc);

        out.trace.extend(res.trace);
        out.inner_iterations += res.k_count;
        out.inner_per_level.push_back(res.k_count);
        out.solver_calls += res.solver_calls;
        out.oracle_evals += res.oracle_evals;
        out.outer_iterations = m + 1;
        if (res.status == DriverStatus::Budget) {
            // Keep the last level's certified point when this level produced nothing.
            if (!res.x.empty() && out.x_star.empty()) out.x_star = res.x;
            out.status = OutcomeStatus::BudgetExceeded;
            out.eps_final = res.eps_terminal;
            break;
        }
        out.x_star = res.x;
        out.eps_final = res.eps_terminal;
        eps = res.eps_terminal / cfg.r;
        Y = cfg.warm_start_discretization ? res.final_points : cfg.y0;
        if (out.solver_calls >= cfg.max_solver_calls && m < out.m_star) {
            out.status = OutcomeStatus::BudgetExceeded;
            break;
        }
    }
    evaluate_outcome(problem, out);
    return out;
}

SimultaneousConfig::SimultaneousConfig(double delta, ToleranceSchedule schedule, double eps0, double r, double rho,
                                       std::optional<double> delta_star)
    : delta_(delta), schedule_(std::move(schedule)), eps0_(eps0), r_(r), rho_(rho),
      delta_star_(delta_star ? *delta_star : delta / 2.0) {
    if (!(delta_ > 0.0) || !std::isfinite(delta_)) throw ConfigError("simultaneous: delta must be finite and > 0");
    check_restriction_inputs(eps0_, r_, rho_, schedule_, "simultaneous");
    if (!(delta_star_ > 0.0)) throw ConfigError("simultaneous: delta_star must be > 0");
    if (!(schedule_.sup_obj() < delta_ / 2.0))
        throw ConfigError("simultaneous: sup of objective tolerances must be < delta/2");
}

SolveOutcome run_simultaneous(const SipProblem& problem, const SimultaneousConfig& cfg) {
    check_points(problem, cfg.y0_check);
    check_points(problem, cfg.y0_hat);
    if (cfg.max_solver_calls == 0) throw ConfigError("simultaneous: solver budget must be positive");
    const auto& sched = cfg.schedule();

    SolveOutcome out;
    double eps = cfg.eps0();
    Discretization Ycheck = cfg.y0_check;
    Discretization Yhat = cfg.y0_hat;
    std::optional<Vec> warm_check, warm_hat;
    std::size_t level_iters = 0;

    auto close_level = [&] {
        out.inner_per_level.push_back(level_iters);
        level_iters = 0;
    };

    for (std::size_t k = 0;; ++k) {
        TraceRow row{k, eps, Yhat.size(), kInf, kNaN, "", 0, 0};
        if (out.solver_calls + 2 > cfg.max_solver_calls) {
            out.status = OutcomeStatus::BudgetExceeded;
            break;
        }
        ++level_iters;
        out.inner_iterations = k + 1;
        try {
            FiniteSolverOptions copts;
            copts.warm_start = warm_check;
            const auto check = solve_discretized(DiscretizedProblem{&problem, 0.0, Ycheck}, sched.obj(k), copts);
            ++out.solver_calls;
            out.oracle_evals += check.evaluations;
            row.lp_iters += check.lp_pivots;
            if (check.status == SolveStatus::Infeasible)
                throw InputError("simultaneous: the unrestricted discretized problem is infeasible");
            if (check.status == SolveStatus::Undecided) {
                row.branch = "budget";
                row.oracle_evals = out.oracle_evals;
                out.trace.append(row);
                out.status = OutcomeStatus::BudgetExceeded;
                break;
            }
            out.check_x = check.x;
            warm_check = check.x;
            const AuxRound aux_check = run_aux_round(problem, check.x, k, sched);
            out.oracle_evals += aux_check.evaluations;

            FiniteSolverOptions hopts;
            hopts.warm_start = warm_hat;
            const auto hat = solve_discretized(DiscretizedProblem{&problem, eps, Yhat}, sched.obj(k), hopts);
            ++out.solver_calls;
            out.oracle_evals += hat.evaluations;
            row.lp_iters += hat.lp_pivots;
            if (hat.status == SolveStatus::Infeasible) {
                row.branch = "infeasible";
                row.oracle_evals = out.oracle_evals;
                out.trace.append(row);
                eps /= cfg.r();
                close_level();
                continue;
            }
            if (hat.status == SolveStatus::Undecided) {
                row.branch = "budget";
                row.oracle_evals = out.oracle_evals;
                out.trace.append(row);
                out.status = OutcomeStatus::BudgetExceeded;
                break;
            }
            out.x_star = hat.x;
            warm_hat = hat.x;
            row.f_x = hat.upper;
            const AuxRound aux_hat = run_aux_round(problem, hat.x, k, sched);
            out.oracle_evals += aux_hat.evaluations;
            row.max_violation = aux_hat.violator.value;
            row.oracle_evals = out.oracle_evals;

            if (hat.upper > check.upper + cfg.delta_star()) {
                row.branch = "value_gap";
                out.trace.append(row);
                Ycheck = update_discretization(problem, Ycheck, check.x, 0.0, cfg.rho(), aux_check.violator, 0, 0,
                                               check.active_points);
                eps /= cfg.r();
                close_level();
            } else if (!aux_hat.all_satisfied) {
                row.branch = "violation";
                out.trace.append(row);
                Yhat = update_discretization(problem, Yhat, hat.x, eps, cfg.rho(), aux_hat.violator, 0, 0,
                                             hat.active_points);
            } else {
                row.branch = "terminate";
                out.trace.append(row);
                out.status = OutcomeStatus::DeltaApproximate;
                break;
            }
        } catch (const BudgetExhausted&) {
            row.branch = "budget";
            row.oracle_evals = out.oracle_evals;
            out.trace.append(row);
            out.status = OutcomeStatus::BudgetExceeded;
            break;
        }
    }
    if (level_iters > 0) close_level();
    out.outer_iterations = out.inner_per_level.size();
    out.eps_final = eps;
    evaluate_outcome(problem, out);
    return out;
}

}  // namespace csip
