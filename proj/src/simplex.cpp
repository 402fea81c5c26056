#include "csip/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace csip::lp {

const char* to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
        case Status::IterationLimit: return "iteration_limit";
    }
    return "unknown";
}

namespace {

// Solves B' pi = rhs by Gaussian elimination with partial pivoting. B is
// given column-wise: cols[k] is the k-th basic column.
Vec solve_transposed(const std::vector<Vec>& cols, const Vec& rhs) {
    const std::size_t m = cols.size();
    // Row k of B' is column k of B.
    std::vector<Vec> a(m, Vec(m + 1));
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 0; i < m; ++i) a[k][i] = cols[k][i];
        a[k][m] = rhs[k];
    }
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        const double d = a[col][col];
        if (d == 0.0) continue;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col || a[r][col] == 0.0) continue;
            const double f = a[r][col] / d;
            for (std::size_t c = col; c <= m; ++c) a[r][c] -= f * a[col][c];
        }
    }
    Vec x(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) x[i] = a[i][i] != 0.0 ? a[i][m] / a[i][i] : 0.0;
    return x;
}

class Tableau {
public:
    Tableau(const StandardForm& p, const Options& opt) : opt_(opt), m_(p.rhs.size()), n_(p.cost.size()) {
        width_ = n_ + m_ + 1;
        t_.assign((m_ + 1) * width_, 0.0);
        sign_.assign(m_, 1.0);
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            sign_[i] = p.rhs[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) at(i, j) = sign_[i] * p.M[i][j];
            at(i, n_ + i) = 1.0;
            at(i, width_ - 1) = sign_[i] * p.rhs[i];
            basis_[i] = n_ + i;
        }
    }

    double& at(std::size_t r, std::size_t c) { return t_[r * width_ + c]; }
    double at(std::size_t r, std::size_t c) const { return t_[r * width_ + c]; }
    double rhs(std::size_t r) const { return at(r, width_ - 1); }

    void load_phase1_costs() {
        for (std::size_t c = 0; c < width_; ++c) at(m_, c) = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) at(m_, j) -= at(i, j);
            at(m_, width_ - 1) -= rhs(i);
        }
    }

    void load_phase2_costs(const Vec& cost) {
        for (std::size_t c = 0; c < width_; ++c) at(m_, c) = 0.0;
        for (std::size_t j = 0; j < n_; ++j) at(m_, j) = cost[j];
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = basis_[i] < n_ ? cost[basis_[i]] : 0.0;
            if (cb == 0.0) continue;
            for (std::size_t c = 0; c < width_; ++c) at(m_, c) -= cb * at(i, c);
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        const double d = at(r, c);
        for (std::size_t k = 0; k < width_; ++k) at(r, k) /= d;
        at(r, c) = 1.0;
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == r) continue;
            const double f = at(i, c);
            if (f == 0.0) continue;
            for (std::size_t k = 0; k < width_; ++k) at(i, k) -= f * at(r, k);
            at(i, c) = 0.0;
        }
        basis_[r] = c;
        ++pivots_;
    }

    // Bland's rule over columns [0, n_). Returns the terminating status.
    Status iterate() {
        while (true) {
            if (pivots_ >= opt_.max_pivots) return Status::IterationLimit;
            std::size_t enter = n_;
            for (std::size_t j = 0; j < n_; ++j) {
                if (at(m_, j) < -opt_.optimality_tol * cost_scale_) {
                    enter = j;
                    break;
                }
            }
            if (enter == n_) return Status::Optimal;
            double best_ratio = kInf;
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = at(i, enter);
                if (a > opt_.pivot_tol) best_ratio = std::min(best_ratio, rhs(i) / a);
            }
            std::size_t leave = m_;
            if (best_ratio < kInf) {
                const double slack = 1e-13 * (1.0 + std::abs(best_ratio));
                for (std::size_t i = 0; i < m_; ++i) {
                    const double a = at(i, enter);
                    if (a <= opt_.pivot_tol || rhs(i) / a > best_ratio + slack) continue;
                    if (leave == m_ || basis_[i] < basis_[leave]) leave = i;
                }
            }
            if (leave == m_) return Status::Unbounded;
            pivot(leave, enter);
        }
    }

    // Pivots basic artificials out where some original column allows it.
    void expel_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            std::size_t best = n_;
            double mag = opt_.pivot_tol;
            for (std::size_t j = 0; j < n_; ++j) {
                if (std::abs(at(i, j)) > mag) {
                    mag = std::abs(at(i, j));
                    best = j;
                }
            }
            if (best < n_) pivot(i, best);
        }
    }

    void set_cost_scale(double s) { cost_scale_ = std::max(1.0, s); }

    std::size_t m_rows() const { return m_; }
    std::size_t n_cols() const { return n_; }
    const std::vector<std::size_t>& basis() const { return basis_; }
    double sign(std::size_t i) const { return sign_[i]; }
    std::size_t pivots() const { return pivots_; }

private:
    Options opt_;
    std::size_t m_;
    std::size_t n_;
    std::size_t width_ = 0;
    std::vector<double> t_;
    Vec sign_;
    std::vector<std::size_t> basis_;
    std::size_t pivots_ = 0;
    double cost_scale_ = 1.0;
};

}  // namespace

StandardResult solve_standard(const StandardForm& problem, const Options& options) {
    const std::size_t m = problem.rhs.size();
    const std::size_t n = problem.cost.size();
    if (problem.M.size() != m) throw InputError("lp: row count mismatch");
    for (const auto& row : problem.M)
        if (row.size() != n) throw InputError("lp: column count mismatch");

    StandardResult out;
    Tableau tab(problem, options);

    double rhs_scale = 1.0;
    for (double r : problem.rhs) rhs_scale = std::max(rhs_scale, std::abs(r));
    tab.set_cost_scale(rhs_scale);
    tab.load_phase1_costs();
    Status s1 = tab.iterate();
    if (s1 == Status::IterationLimit) {
        out.status = s1;
        out.pivots = tab.pivots();
        return out;
    }
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis()[i] >= n) infeas += std::abs(tab.rhs(i));
    if (infeas > options.feasibility_tol * rhs_scale) {
        out.status = Status::Infeasible;
        out.pivots = tab.pivots();
        return out;
    }
    tab.expel_artificials();

    double cost_scale = 1.0;
    for (double c : problem.cost) cost_scale = std::max(cost_scale, std::abs(c));
    tab.set_cost_scale(cost_scale);
    tab.load_phase2_costs(problem.cost);
    out.status = tab.iterate();
    out.pivots = tab.pivots();
    if (out.status != Status::Optimal) return out;

    out.primal.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (tab.basis()[i] < n) out.primal[tab.basis()[i]] = std::max(0.0, tab.rhs(i));
    }
    out.objective = dot(problem.cost, out.primal);

    // Multipliers re-solved from the original data: B' pi = c_B.
    std::vector<Vec> cols(m, Vec(m, 0.0));
    Vec cb(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t j = tab.basis()[k];
        if (j < n) {
            for (std::size_t i = 0; i < m; ++i) cols[k][i] = problem.M[i][j];
            cb[k] = problem.cost[j];
        } else {
            cols[k][j - n] = tab.sign(j - n);
        }
    }
    out.duals = solve_transposed(cols, cb);
    return out;
}

InequalityResult solve_inequality(const Vec& c, const std::vector<Vec>& A, const Vec& b, const Options& options) {
    const std::size_t nv = c.size();
    const std::size_t nr = A.size();
    if (b.size() != nr) throw InputError("lp: inequality rhs size mismatch");
    StandardForm dual;
    dual.M.assign(nv, Vec(nr, 0.0));
    for (std::size_t r = 0; r < nr; ++r) {
        if (A[r].size() != nv) throw InputError("lp: inequality row size mismatch");
        for (std::size_t j = 0; j < nv; ++j) dual.M[j][r] = A[r][j];
    }
    dual.rhs.resize(nv);
    for (std::size_t j = 0; j < nv; ++j) dual.rhs[j] = -c[j];
    dual.cost = b;

    const StandardResult res = solve_standard(dual, options);
    InequalityResult out;
    out.pivots = res.pivots;
    switch (res.status) {
        case Status::Optimal:
            out.status = Status::Optimal;
            out.v = res.duals;
            out.multipliers = res.primal;
            out.objective = dot(c, out.v);
            break;
        case Status::Unbounded: out.status = Status::Infeasible; break;
        case Status::Infeasible: out.status = Status::Unbounded; break;
        case Status::IterationLimit: out.status = Status::IterationLimit; break;
    }
    return out;
}

}  // namespace csip::lp
