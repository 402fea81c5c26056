#include "csip/core_loop.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>

namespace csip {

void RunTrace::append(TraceRow row) {
    if (!rows_.empty() && row.k <= rows_.back().k) throw InputError("trace: iteration index must increase");
    rows_.push_back(std::move(row));
}

void RunTrace::extend(const RunTrace& other) {
    for (const auto& r : other.rows()) append(r);
}

void RunTrace::write_csv(std::ostream& out) const {
    const auto old_precision = out.precision();
    out << "k,eps,card_Y,f_x,max_violation,branch,lp_iters,oracle_evals\n";
    out << std::setprecision(17);
    for (const auto& r : rows_) {
        out << r.k << ',' << r.eps << ',' << r.card_y << ',' << r.f_x << ',' << r.max_violation << ',' << r.branch
            << ',' << r.lp_iters << ',' << r.oracle_evals << '\n';
    }
    out.precision(old_precision);
}

const char* to_string(CoreStatus s) {
    switch (s) {
        case CoreStatus::Terminated: return "Terminated";
        case CoreStatus::InfeasibleSubproblem: return "InfeasibleSubproblem";
        case CoreStatus::Budget: return "Budget";
    }
    return "unknown";
}

void CoreConfig::validate(const SipProblem& problem) const {
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw ConfigError("core: eps must be finite and >= 0");
    if (!(rho >= 0.0)) throw ConfigError("core: rho must be >= 0 or infinite");
    schedule.validate();
    if (schedule.regime() == Regime::Summable && rho == 0.0)
        throw ConfigError("core: a summable objective schedule requires rho != 0");
    for (const auto& y : y0.points()) require_dim(y, problem.y_dim(), "initial discretization point");
    y0.check_within(problem.y_domain());
    if (max_iters == 0) throw ConfigError("core: max_iters must be positive");
}

AuxRound run_aux_round(const SipProblem& problem, std::span<const double> x, std::size_t k,
                       const ToleranceSchedule& schedule) {
    AuxRound round;
    round.all_satisfied = true;
    for (const auto& fam : problem.constraints()) {
        const double delta = schedule.aux(k, fam.index);
        CertifiedMax cm = certified_max(fam, problem.y_domain(), x, delta);
        round.evaluations += cm.evaluations;
        if (cm.value > -delta) round.all_satisfied = false;
        round.results.emplace(fam.index, std::move(cm));
    }
    auto [i, cm] = strongest_violator(round.results);
    round.violator_index = i;
    round.violator = std::move(cm);
    return round;
}

Discretization update_discretization(const SipProblem& problem, const Discretization& yk, std::span<const double> xk,
                                     double eps, double rho, const CertifiedMax& violator, std::size_t extra,
                                     std::uint64_t seed, const std::vector<bool>& binding) {
    Discretization next(yk.dedup_tol());
    const double threshold = -eps - rho;
    for (std::size_t j = 0; j < yk.size(); ++j) {
        const Vec& y = yk.points()[j];
        bool keep = rho == kInf;
        for (const auto& fam : problem.constraints()) {
            if (keep) break;
            keep = fam.value(xk, y) >= threshold;
        }
        if (keep) next.add(y);
    }
    // The second component may be any finite set containing the violator;
    // it also carries the points binding in the last master model.
    next.add(violator.y_star);
    for (std::size_t j = 0; j < yk.size() && j < binding.size(); ++j) {
        if (binding[j]) next.add(yk.points()[j]);
    }
    if (extra > 0) {
        std::mt19937_64 rng(seed);
        const BoxDomain& Y = problem.y_domain();
        for (std::size_t n = 0; n < extra; ++n) {
            Vec y(Y.dim());
            for (std::size_t j = 0; j < Y.dim(); ++j) {
                std::uniform_real_distribution<double> u(Y.lower(j), Y.upper(j));
                y[j] = Y.width(j) > 0.0 ? u(rng) : Y.lower(j);
            }
            next.add(std::move(y));
        }
    }
    return next;
}

CoreResult run_core(const SipProblem& problem, const CoreConfig& cfg) {
    cfg.validate(problem);
    CoreResult out;
    Discretization Y = cfg.y0;
    std::optional<Vec> warm;

    auto finish = [&](CoreStatus s) {
        out.status = s;
        out.final_points = Y;
        return out;
    };

    for (std::size_t k = 0; k < cfg.max_iters; ++k) {
        out.k = k;
        TraceRow row{k, cfg.eps, Y.size(), 0.0, 0.0, "", 0, 0};
        try {
            DiscretizedProblem dp{&problem, cfg.eps, Y};
            FiniteSolverOptions opts;
            opts.warm_start = warm;
            const auto sol = solve_discretized(dp, cfg.schedule.obj(k), opts);
            out.oracle_evals += sol.evaluations;
            row.lp_iters = sol.lp_pivots;
            if (sol.status == SolveStatus::Infeasible) {
                row.f_x = kInf;
                row.max_violation = std::numeric_limits<double>::quiet_NaN();
                row.branch = "infeasible";
                row.oracle_evals = out.oracle_evals;
                out.trace.append(row);
                return finish(CoreStatus::InfeasibleSubproblem);
            }
            if (sol.status == SolveStatus::Undecided) {
                row.branch = "budget";
                row.oracle_evals = out.oracle_evals;
                out.trace.append(row);
                return finish(CoreStatus::Budget);
            }
            out.x = sol.x;
            out.iterates.push_back(sol.x);
            warm = sol.x;
            row.f_x = sol.upper;

            const AuxRound aux = run_aux_round(problem, out.x, k, cfg.schedule);
            out.oracle_evals += aux.evaluations;
            row.max_violation = aux.violator.value;
            row.oracle_evals = out.oracle_evals;
            if (aux.all_satisfied) {
                row.branch = "terminate";
                out.trace.append(row);
                return finish(CoreStatus::Terminated);
            }
            Y = update_discretization(problem, Y, out.x, cfg.eps, cfg.rho, aux.violator, cfg.extra_violators, k, sol.active_points);
            row.branch = "refine";
            out.trace.append(row);
        } catch (const BudgetExhausted&) {
            row.branch = "budget";
            row.oracle_evals = out.oracle_evals;
            out.trace.append(row);
            return finish(CoreStatus::Budget);
        }
    }
    return finish(CoreStatus::Budget);
}

}  // namespace csip
