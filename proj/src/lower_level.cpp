#include "csip/lower_level.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>

namespace csip {

namespace {

struct Cell {
    Vec lo;
    Vec hi;
    double bound = 0.0;
    double value = 0.0;
    std::uint64_t seq = 0;
};

struct CellOrder {
    bool operator()(const Cell& a, const Cell& b) const {
        if (a.bound != b.bound) return a.bound < b.bound;
        return a.seq > b.seq;
    }
};

}  // namespace

CertifiedMax certified_max(const ConstraintFamily& family, const BoxDomain& y_domain, std::span<const double> x,
                           double delta, const LowerLevelOptions& options) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw InputError("certified_max: delta must be positive");
    if (!std::isfinite(family.lipschitz_in_y) || family.lipschitz_in_y < 0.0)
        throw InputError("certified_max: family Lipschitz constant must be finite and nonnegative");

    const std::size_t q = y_domain.dim();
    const SliceBound sharp = family.slice_bound ? family.slice_bound(x) : SliceBound{};
    const double lip = family.lipschitz_in_y;

    CertifiedMax best;
    best.value = -kInf;
    std::uint64_t seq = 0;

    Vec center(q), radius(q);
    auto make_cell = [&](Vec lo, Vec hi) {
        double rmax = 0.0;
        for (std::size_t j = 0; j < q; ++j) {
            center[j] = 0.5 * (lo[j] + hi[j]);
            radius[j] = 0.5 * (hi[j] - lo[j]);
            rmax = std::max(rmax, radius[j]);
        }
        const double v = family.value(x, center);
        ++best.evaluations;
        if (v > best.value) {
            best.value = v;
            best.y_star = center;
        }
        double ub = v + lip * rmax;
        if (sharp) ub = std::min(ub, sharp(center, radius));
        return Cell{std::move(lo), std::move(hi), std::max(ub, v), v, seq++};
    };

    std::priority_queue<Cell, std::vector<Cell>, CellOrder> open;
    open.push(make_cell(y_domain.lower(), y_domain.upper()));

    std::size_t processed = 0;
    while (true) {
        const Cell& top = open.top();
        const double gap = top.bound - best.value;
        if (gap <= delta) {
            best.gap = std::max(gap, 0.0);
            return best;
        }
        if (++processed > options.max_boxes) {
            throw BudgetExhausted("certified_max: box budget exhausted with gap " + std::to_string(gap));
        }
        Cell cell = top;
        open.pop();
        auto split = [&](std::size_t axis) {
            const double mid = 0.5 * (cell.lo[axis] + cell.hi[axis]);
            Vec left_hi = cell.hi;
            left_hi[axis] = mid;
            Vec right_lo = cell.lo;
            right_lo[axis] = mid;
            return std::pair<Cell, Cell>{make_cell(cell.lo, std::move(left_hi)), make_cell(std::move(right_lo), cell.hi)};
        };
        // With a sharp bound, split the axis that tightens the halves' enclosures
        // the most (a ridge of maximizers along one axis is never split needlessly).
        // A degenerate cell has bound == value <= best and never reaches here.
        std::optional<std::pair<Cell, Cell>> chosen;
        if (!sharp || q == 1) {
            std::size_t axis = 0;
            for (std::size_t j = 1; j < q; ++j)
                if (cell.hi[j] - cell.lo[j] > cell.hi[axis] - cell.lo[axis]) axis = j;
            chosen = split(axis);
        } else {
            double chosen_score = kInf, chosen_width = -1.0;
            for (std::size_t j = 0; j < q; ++j) {
                const double w = cell.hi[j] - cell.lo[j];
                if (w <= 0.0) continue;
                auto children = split(j);
                const double score = std::max(children.first.bound - children.first.value,
                                              children.second.bound - children.second.value);
                if (!chosen || score < chosen_score || (score == chosen_score && w > chosen_width)) {
                    chosen_score = score;
                    chosen_width = w;
                    chosen = std::move(children);
                }
            }
        }
        open.push(std::move(chosen->first));
        open.push(std::move(chosen->second));
    }
}

std::map<int, CertifiedMax> certified_max_all(const SipProblem& problem, std::span<const double> x,
                                              const std::function<double(int)>& delta,
                                              const LowerLevelOptions& options) {
    std::map<int, CertifiedMax> out;
    for (const auto& fam : problem.constraints()) {
        out.emplace(fam.index, certified_max(fam, problem.y_domain(), x, delta(fam.index), options));
    }
    return out;
}

std::pair<int, CertifiedMax> strongest_violator(const std::map<int, CertifiedMax>& results) {
    if (results.empty()) throw InputError("strongest_violator: no lower-level results");
    auto best = results.begin();
    for (auto it = std::next(results.begin()); it != results.end(); ++it) {
        if (it->second.value > best->second.value) best = it;
    }
    return *best;
}

double certified_violation_bound(const SipProblem& problem, std::span<const double> x, double delta) {
    double worst = -kInf;
    for (const auto& fam : problem.constraints()) {
        const auto cm = certified_max(fam, problem.y_domain(), x, delta);
        worst = std::max(worst, cm.value + cm.gap);
    }
    return worst;
}

}  // namespace csip
