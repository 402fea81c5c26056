#include "csip/finite_solver.hpp"

#include <algorithm>
#include <cmath>

#include "csip/qp.hpp"
#include "csip/simplex.hpp"

namespace csip {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Undecided: return "undecided";
    }
    return "unknown";
}

void DiscretizedProblem::validate() const {
    if (base == nullptr) throw InputError("discretized problem: missing base problem");
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw InputError("discretized problem: eps must be finite and >= 0");
    for (const auto& y : points.points()) require_dim(y, base->y_dim(), "discretization point");
    points.check_within(base->y_domain());
}

namespace {

// Outer linear model in v = (x, t): rows r with r.a' v <= r.b. The box on x
// is part of the model.
class CutModel {
public:
    explicit CutModel(const BoxDomain& box) : p_(box.dim()) {
        for (std::size_t k = 0; k < p_; ++k) {
            Vec up(p_ + 1, 0.0), lo(p_ + 1, 0.0);
            up[k] = 1.0;
            lo[k] = -1.0;
            add_row(std::move(up), box.upper(k));
            add_row(std::move(lo), -box.lower(k));
        }
    }

    // value(x) + s'(z - x) <= t
    void add_epigraph_cut(std::span<const double> x, double value, std::span<const double> s) {
        Vec row(p_ + 1);
        for (std::size_t k = 0; k < p_; ++k) row[k] = s[k];
        row[p_] = -1.0;
        add_row(std::move(row), dot(s, x) - value);
    }

    // value(x) + s'(z - x) <= 0, generated by discretization point `point`.
    void add_constraint_cut(std::span<const double> x, double value, std::span<const double> s, std::size_t point) {
        Vec row(p_ + 1, 0.0);
        for (std::size_t k = 0; k < p_; ++k) row[k] = s[k];
        add_row(std::move(row), dot(s, x) - value, static_cast<long>(point));
    }

    // Points owning a cut with a positive multiplier in `lp`.
    std::vector<bool> active_points(const lp::InequalityResult& lp, std::size_t num_points) const {
        std::vector<bool> active(num_points, false);
        for (std::size_t r = 0; r < owner_.size() && r < lp.multipliers.size(); ++r) {
            if (owner_[r] >= 0 && lp.multipliers[r] > kActiveMultiplier) active[static_cast<std::size_t>(owner_[r])] = true;
        }
        return active;
    }

    lp::InequalityResult solve() const {
        Vec c(p_ + 1, 0.0);
        c[p_] = 1.0;
        return lp::solve_inequality(c, rows_, rhs_);
    }

    // Point of {x : model(x) <= level} closest to center in the max-norm.
    // Variables (x, s); epigraph rows get t fixed at level.
    lp::InequalityResult project_on_level(double level, std::span<const double> center) const {
        std::vector<Vec> rows;
        Vec rhs;
        rows.reserve(rows_.size() + 2 * p_);
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            Vec row = rows_[r];
            double b = rhs_[r];
            if (row[p_] != 0.0) {
                b -= row[p_] * level;
                row[p_] = 0.0;
            }
            rows.push_back(std::move(row));
            rhs.push_back(b);
        }
        for (std::size_t k = 0; k < p_; ++k) {
            Vec up(p_ + 1, 0.0), lo(p_ + 1, 0.0);
            up[k] = 1.0;
            up[p_] = -1.0;
            lo[k] = -1.0;
            lo[p_] = -1.0;
            rows.push_back(std::move(up));
            rhs.push_back(center[k]);
            rows.push_back(std::move(lo));
            rhs.push_back(-center[k]);
        }
        Vec c(p_ + 1, 0.0);
        c[p_] = 1.0;
        return lp::solve_inequality(c, rows, rhs);
    }

private:
    void add_row(Vec a, double b, long owner = -1) {
        rows_.push_back(std::move(a));
        rhs_.push_back(b);
        owner_.push_back(owner);
    }

    static constexpr double kActiveMultiplier = 1e-12;

    std::size_t p_;
    std::vector<Vec> rows_;
    Vec rhs_;
    std::vector<long> owner_;
};

// Evaluates h_ij(x) = g_i(x, y_j) + eps over all (family, point) pairs.
class ConstraintSet {
public:
    explicit ConstraintSet(const DiscretizedProblem& dp) : dp_(dp) {
        const std::size_t n = dp.base->constraints().size() * dp.points.size();
        has_exact_cut_.assign(n, false);
    }

    std::size_t size() const { return has_exact_cut_.size(); }

    double max_violation(std::span<const double> x) {
        double worst = -kInf;
        for (const auto& fam : dp_.base->constraints()) {
            for (const auto& y : dp_.points.points()) {
                worst = std::max(worst, fam.value(x, y) + dp_.eps);
                ++evaluations;
            }
        }
        return worst;
    }

    // Adds cuts at x for all pairs with h > threshold (or all pairs when
    // threshold is -inf), skipping affine pairs that already have their cut.
    template <class AddCut>
    double add_cuts(std::span<const double> x, double threshold, AddCut&& add) {
        double worst = -kInf;
        std::size_t pair = 0;
        for (const auto& fam : dp_.base->constraints()) {
            for (std::size_t j = 0; j < dp_.points.size(); ++j) {
                const Vec& y = dp_.points.points()[j];
                const double h = fam.value(x, y) + dp_.eps;
                ++evaluations;
                worst = std::max(worst, h);
                if (h > threshold && !(fam.affine_in_x && has_exact_cut_[pair])) {
                    add(h, fam.subgradient_x(x, y), j);
                    if (fam.affine_in_x) has_exact_cut_[pair] = true;
                }
                ++pair;
            }
        }
        return worst;
    }

    std::uint64_t evaluations = 0;

private:
    const DiscretizedProblem& dp_;
    std::vector<bool> has_exact_cut_;
};

// Position of the level between the lower and upper bound.
constexpr double kLevelFraction = 0.3;

Vec head(const Vec& v, std::size_t p) { return Vec(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(p)); }

Vec lerp(std::span<const double> a, std::span<const double> b, double lambda) {
    Vec out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + lambda * (b[k] - a[k]);
    return out;
}

}  // namespace

namespace {

double gap_target(double delta_bar, double upper) { return std::max(delta_bar, kGapFloor * std::max(1.0, std::abs(upper))); }

// Largest feasible step from anchor toward trial (bisection on the violation).
std::optional<Vec> restore(ConstraintSet& cons, const Vec& anchor, const Vec& trial) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cons.max_violation(lerp(anchor, trial, mid)) <= kFeasTol) lo = mid;
        else hi = mid;
    }
    if (lo > 0.0) return lerp(anchor, trial, lo);
    return std::nullopt;
}

// Cutting planes on the constraints only, with the positive definite
// quadratic objective kept exact in the master problem. Returns nullopt when
// the master solver breaks down.
std::optional<DiscretizedSolveResult> solve_with_qp_master(const DiscretizedProblem& dp, double delta_bar,
                                                           const FiniteSolverOptions& options,
                                                           const qp::Solver& master) {
    const SipProblem& prob = *dp.base;
    const BoxDomain& X = prob.x_domain();
    const std::size_t p = X.dim();
    const auto& f = prob.objective();

    DiscretizedSolveResult res;
    res.gap_request = delta_bar;
    ConstraintSet cons(dp);
    std::vector<Vec> rows;
    Vec rhs;
    std::vector<long> owner;
    for (std::size_t k = 0; k < p; ++k) {
        Vec up(p, 0.0), lo(p, 0.0);
        up[k] = 1.0;
        lo[k] = -1.0;
        rows.push_back(std::move(up));
        rhs.push_back(X.upper(k));
        owner.push_back(-1);
        rows.push_back(std::move(lo));
        rhs.push_back(-X.lower(k));
        owner.push_back(-1);
    }
    auto add_cut = [&](const Vec& x, double h, const Vec& s, std::size_t j) {
        rows.push_back(s);
        rhs.push_back(dot(s, x) - h);
        owner.push_back(static_cast<long>(j));
    };
    auto consider = [&](const Vec& x) {
        const double fx = f.value(x);
        if (fx < res.upper) {
            res.upper = fx;
            res.x = x;
        }
    };

    const Vec start = options.warm_start ? X.clamp(*options.warm_start) : X.center();
    const double v0 =
        cons.add_cuts(start, -kInf, [&](double h, const Vec& s, std::size_t j) { add_cut(start, h, s, j); });
    if (v0 <= kFeasTol) consider(start);

    while (res.iterations < options.max_iterations) {
        ++res.iterations;
        const qp::Result sol = master.solve(rows, rhs);
        res.lp_pivots += sol.iterations;
        if (sol.status == qp::Status::Infeasible) {
            res.status = SolveStatus::Infeasible;
            res.x.clear();
            res.upper = kInf;
            res.lower = kInf;
            res.evaluations = cons.evaluations;
            return res;
        }
        if (sol.status != qp::Status::Optimal) return std::nullopt;
        res.lower = std::max(res.lower, sol.dual_bound);

        const Vec xm = X.clamp(sol.x);
        const double viol =
            cons.add_cuts(xm, kFeasTol, [&](double h, const Vec& s, std::size_t j) { add_cut(xm, h, s, j); });
        if (viol <= kFeasTol) consider(xm);
        else if (!res.x.empty()) {
            if (auto z = restore(cons, res.x, xm)) consider(*z);
        }

        res.gap_target = gap_target(delta_bar, res.upper);
        if (!res.x.empty() && res.upper - res.lower <= res.gap_target) {
            res.status = SolveStatus::Feasible;
            res.active_points.assign(dp.points.size(), false);
            for (std::size_t r = 0; r < owner.size(); ++r) {
                if (owner[r] >= 0 && sol.multipliers[r] > 0.0) res.active_points[static_cast<std::size_t>(owner[r])] = true;
            }
            res.evaluations = cons.evaluations;
            return res;
        }
    }
    res.status = SolveStatus::Undecided;
    res.gap_target = gap_target(delta_bar, res.upper);
    res.evaluations = cons.evaluations;
    return res;
}

// Kelley cutting planes on the epigraph with level-set stabilization.
DiscretizedSolveResult solve_with_lp_master(const DiscretizedProblem& dp, double delta_bar,
                                            const FiniteSolverOptions& options) {
    const SipProblem& prob = *dp.base;
    const BoxDomain& X = prob.x_domain();
    const std::size_t p = X.dim();
    const auto& f = prob.objective();

    DiscretizedSolveResult res;
    res.gap_request = delta_bar;
    CutModel model(X);
    ConstraintSet cons(dp);

    auto target = [&](double upper) { return gap_target(delta_bar, upper); };

    auto consider = [&](const Vec& x, double fx) {
        if (fx < res.upper) {
            res.upper = fx;
            res.x = x;
        }
    };

    Vec trial = options.warm_start ? X.clamp(*options.warm_start) : X.center();
    {
        const double fx = f.value(trial);
        model.add_epigraph_cut(trial, fx, f.subgradient(trial));
        const double viol = cons.add_cuts(trial, -kInf, [&](double h, const Vec& s, std::size_t j) {
            model.add_constraint_cut(trial, h, s, j);
        });
        if (viol <= kFeasTol) consider(trial, fx);
    }

    auto add_probe = [&](const Vec& trial) {
        const double fx = f.value(trial);
        model.add_epigraph_cut(trial, fx, f.subgradient(trial));
        const double viol =
            cons.add_cuts(trial, kFeasTol, [&](double h, const Vec& s, std::size_t j) { model.add_constraint_cut(trial, h, s, j); });
        if (viol <= kFeasTol) {
            consider(trial, fx);
            return;
        }
        if (res.x.empty()) return;
        if (auto z = restore(cons, res.x, trial)) {
            const double fz = f.value(*z);
            model.add_epigraph_cut(*z, fz, f.subgradient(*z));
            consider(*z, fz);
        }
    };

    while (res.iterations < options.max_iterations) {
        ++res.iterations;
        const auto lp = model.solve();
        res.lp_pivots += lp.pivots;
        if (lp.status == lp::Status::Infeasible) {
            res.status = SolveStatus::Infeasible;
            res.x.clear();
            res.upper = kInf;
            res.lower = kInf;
            res.evaluations = cons.evaluations;
            return res;
        }
        if (lp.status != lp::Status::Optimal) break;
        res.lower = std::max(res.lower, lp.objective);
        res.gap_target = target(res.upper);
        if (!res.x.empty() && res.upper - res.lower <= res.gap_target) {
            res.status = SolveStatus::Feasible;
            res.active_points = model.active_points(lp, dp.points.size());
            res.evaluations = cons.evaluations;
            return res;
        }

        // Probe the model minimizer and, once an incumbent exists, the
        // max-norm projection of the incumbent onto the level set.
        std::vector<Vec> probes{X.clamp(head(lp.v, p))};
        if (!res.x.empty()) {
            const double level = res.lower + kLevelFraction * (res.upper - res.lower);
            const auto proj = model.project_on_level(level, res.x);
            res.lp_pivots += proj.pivots;
            if (proj.status == lp::Status::Optimal) probes.push_back(X.clamp(head(proj.v, p)));
        }
        for (const Vec& probe : probes) add_probe(probe);
    }

    res.status = SolveStatus::Undecided;
    res.gap_target = target(res.upper);
    res.evaluations = cons.evaluations;
    return res;
}

}  // namespace

DiscretizedSolveResult solve_discretized(const DiscretizedProblem& dp, double delta_bar,
                                         const FiniteSolverOptions& options) {
    dp.validate();
    if (!(delta_bar >= 0.0)) throw InputError("solve_discretized: delta_bar must be >= 0");
    const auto& quad = dp.base->objective().quadratic;
    if (quad && !options.force_lp_master) {
        const qp::Solver master(quad->Q, quad->c, quad->d);
        if (master.positive_definite()) {
            if (auto res = solve_with_qp_master(dp, delta_bar, options, master)) return *res;
        }
    }
    return solve_with_lp_master(dp, delta_bar, options);
}

SolveStatus check_feasibility(const DiscretizedProblem& dp, const FiniteSolverOptions& options) {
    dp.validate();
    const BoxDomain& X = dp.base->x_domain();
    const std::size_t p = X.dim();
    if (dp.points.empty()) return SolveStatus::Feasible;

    // Minimize phi(x) = max_ij h_ij(x) through its epigraph.
    CutModel model(X);
    ConstraintSet cons(dp);
    Vec trial = options.warm_start ? X.clamp(*options.warm_start) : X.center();
    double viol = cons.add_cuts(trial, -kInf, [&](double h, const Vec& s, std::size_t) { model.add_epigraph_cut(trial, h, s); });
    if (viol <= kFeasTol) return SolveStatus::Feasible;

    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        const auto lp = model.solve();
        if (lp.status != lp::Status::Optimal) break;
        if (lp.objective > 0.0) return SolveStatus::Infeasible;
        trial = X.clamp(head(lp.v, p));
        viol = cons.add_cuts(trial, kFeasTol, [&](double h, const Vec& s, std::size_t) { model.add_epigraph_cut(trial, h, s); });
        if (viol <= kFeasTol) return SolveStatus::Feasible;
    }
    return SolveStatus::Infeasible;
}

}  // namespace csip
