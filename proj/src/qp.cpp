#include "csip/qp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace csip::qp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Relative size below which a direction counts as linearly dependent.
constexpr double kDependentTol = 1e-12;

VectorXd row_of(const Vec& a) { return Eigen::Map<const VectorXd>(a.data(), static_cast<Eigen::Index>(a.size())); }

// Reflection zeroing d(iq+1..) into d(iq), applied to the columns of J.
void add_constraint(MatrixXd& J, VectorXd& d, Eigen::Index iq) {
    const Eigen::Index n = J.rows();
    for (Eigen::Index j = n - 1; j > iq; --j) {
        double cc = d(j - 1), ss = d(j);
        const double h = std::hypot(cc, ss);
        if (h == 0.0) continue;
        d(j) = 0.0;
        cc /= h;
        ss /= h;
        if (cc < 0.0) {
            cc = -cc;
            ss = -ss;
            d(j - 1) = -h;
        } else {
            d(j - 1) = h;
        }
        const double xny = ss / (1.0 + cc);
        for (Eigen::Index k = 0; k < n; ++k) {
            const double t1 = J(k, j - 1), t2 = J(k, j);
            J(k, j - 1) = t1 * cc + t2 * ss;
            J(k, j) = xny * (t1 + J(k, j - 1)) - t2;
        }
    }
}

// Removes active constraint l and restores the triangular factor.
void delete_constraint(MatrixXd& R, MatrixXd& J, std::vector<std::size_t>& active, VectorXd& u, Eigen::Index& iq,
                       Eigen::Index l) {
    const Eigen::Index n = J.rows();
    for (Eigen::Index i = l + 1; i < iq; ++i) {
        active[static_cast<std::size_t>(i - 1)] = active[static_cast<std::size_t>(i)];
        u(i - 1) = u(i);
        R.col(i - 1) = R.col(i);
    }
    active.pop_back();
    u(iq - 1) = 0.0;
    R.col(iq - 1).setZero();
    --iq;
    for (Eigen::Index j = l; j < iq; ++j) {
        double cc = R(j, j), ss = R(j + 1, j);
        const double h = std::hypot(cc, ss);
        if (h == 0.0) continue;
        cc /= h;
        ss /= h;
        R(j + 1, j) = 0.0;
        if (cc < 0.0) {
            R(j, j) = -h;
            cc = -cc;
            ss = -ss;
        } else {
            R(j, j) = h;
        }
        const double xny = ss / (1.0 + cc);
        for (Eigen::Index k = j + 1; k < iq; ++k) {
            const double t1 = R(j, k), t2 = R(j + 1, k);
            R(j, k) = t1 * cc + t2 * ss;
            R(j + 1, k) = xny * (t1 + R(j, k)) - t2;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
            const double t1 = J(k, j), t2 = J(k, j + 1);
            J(k, j) = t1 * cc + t2 * ss;
            J(k, j + 1) = xny * (J(k, j) + t1) - t2;
        }
    }
}

}  // namespace

const char* to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::NotPositiveDefinite: return "not_positive_definite";
        case Status::Breakdown: return "breakdown";
    }
    return "unknown";
}

Solver::Solver(const std::vector<Vec>& Q, Vec c, double d) : n_(c.size()), c_(std::move(c)), d_(d) {
    if (Q.size() != n_) throw InputError("qp: Q must be n x n");
    MatrixXd G(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < n_; ++i) {
        if (Q[i].size() != n_) throw InputError("qp: Q must be n x n");
        for (std::size_t j = 0; j < n_; ++j) G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Q[i][j] + Q[j][i];
    }
    Q_ = Q;
    Eigen::LLT<MatrixXd> llt(G);
    pd_ = llt.info() == Eigen::Success && n_ > 0;
    if (!pd_) return;
    const MatrixXd L = llt.matrixL();
    if (L.diagonal().minCoeff() <= 0.0) {
        pd_ = false;
        return;
    }
    const MatrixXd J = L.transpose().triangularView<Eigen::Upper>().solve(MatrixXd::Identity(G.rows(), G.cols()));
    J0_.assign(n_, Vec(n_));
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) J0_[i][j] = J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

double Solver::objective(std::span<const double> x) const {
    double s = d_;
    for (std::size_t i = 0; i < n_; ++i) {
        s += c_[i] * x[i];
        for (std::size_t j = 0; j < n_; ++j) s += x[i] * Q_[i][j] * x[j];
    }
    return s;
}

double Solver::dual_value(const std::vector<Vec>& A, const Vec& b, const Vec& u) const {
    if (!pd_) return -kInf;
    // min_x x'Qx + (c + A'u)'x = -1/2 |J'v|^2 with v = c + A'u.
    Vec v = c_;
    double bu = 0.0;
    for (std::size_t r = 0; r < A.size(); ++r) {
        if (u[r] == 0.0) continue;
        for (std::size_t j = 0; j < n_; ++j) v[j] += u[r] * A[r][j];
        bu += u[r] * b[r];
    }
    double sq = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n_; ++k) s += J0_[k][j] * v[k];
        sq += s * s;
    }
    return d_ - bu - 0.5 * sq;
}

Result Solver::solve(const std::vector<Vec>& A, const Vec& b, const Options& options) const {
    Result res;
    if (!pd_) {
        res.status = Status::NotPositiveDefinite;
        return res;
    }
    if (A.size() != b.size()) throw InputError("qp: row count mismatch");
    for (const auto& row : A) {
        if (row.size() != n_) throw InputError("qp: row size mismatch");
    }
    const auto n = static_cast<Eigen::Index>(n_);
    const std::size_t m = A.size();
    MatrixXd J(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) J(i, j) = J0_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    MatrixXd R = MatrixXd::Zero(n, n);
    VectorXd u = VectorXd::Zero(n);
    std::vector<std::size_t> active;
    std::vector<bool> is_active(m, false);
    Eigen::Index iq = 0;

    const VectorXd c = row_of(c_);
    VectorXd x = -(J * (J.transpose() * c));
    std::vector<double> norms(m);
    for (std::size_t i = 0; i < m; ++i) norms[i] = std::max(row_of(A[i]).norm(), 1e-300);
    auto slack = [&](std::size_t i) { return b[i] - row_of(A[i]).dot(x); };

    auto finish = [&](Status s) {
        res.status = s;
        res.x.assign(x.data(), x.data() + n);
        res.multipliers.assign(m, 0.0);
        for (Eigen::Index i = 0; i < iq; ++i) res.multipliers[active[static_cast<std::size_t>(i)]] = std::max(u(i), 0.0);
        res.objective = objective(res.x);
        res.dual_bound = dual_value(A, b, res.multipliers);
        return res;
    };

    while (res.iterations < options.max_iterations) {
        ++res.iterations;
        // Most violated inactive row, measured in distance to its hyperplane.
        std::size_t p = m;
        double worst = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (is_active[i]) continue;
            const double s = slack(i);
            const double scale = 1.0 + std::abs(b[i]) + norms[i] * x.lpNorm<Eigen::Infinity>();
            if (s >= -options.feasibility_tol * scale) continue;
            const double dist = s / norms[i];
            if (dist < worst) {
                worst = dist;
                p = i;
            }
        }
        if (p == m) return finish(Status::Optimal);

        const VectorXd np = -row_of(A[p]);
        double up = 0.0;
        double sp = slack(p);
        while (true) {
            if (++res.iterations > options.max_iterations) return finish(Status::Breakdown);
            VectorXd d = J.transpose() * np;
            const VectorXd z = J.rightCols(n - iq) * d.tail(n - iq);
            VectorXd r = VectorXd::Zero(iq);
            if (iq > 0) r = R.topLeftCorner(iq, iq).triangularView<Eigen::Upper>().solve(d.head(iq));

            double t1 = kInf;
            Eigen::Index l = -1;
            for (Eigen::Index j = 0; j < iq; ++j) {
                if (r(j) > 0.0) {
                    const double t = u(j) / r(j);
                    if (t < t1) {
                        t1 = t;
                        l = j;
                    }
                }
            }
            const bool dependent = d.tail(n - iq).norm() <= kDependentTol * d.norm();
            const double t2 = dependent ? kInf : -sp / z.dot(np);
            if (t1 == kInf && t2 == kInf) return finish(Status::Infeasible);

            if (t2 == kInf) {
                u.head(iq) -= t1 * r;
                up += t1;
                is_active[active[static_cast<std::size_t>(l)]] = false;
                delete_constraint(R, J, active, u, iq, l);
                continue;
            }
            const double t = std::min(t1, t2);
            x += t * z;
            u.head(iq) -= t * r;
            up += t;
            if (t2 <= t1) {
                add_constraint(J, d, iq);
                if (std::abs(d(iq)) <= kDependentTol * d.norm()) return finish(Status::Breakdown);
                R.col(iq).head(iq + 1) = d.head(iq + 1);
                active.push_back(p);
                is_active[p] = true;
                u(iq) = up;
                ++iq;
                break;
            }
            is_active[active[static_cast<std::size_t>(l)]] = false;
            delete_constraint(R, J, active, u, iq, l);
            sp = slack(p);
        }
    }
    return finish(Status::Breakdown);
}

}  // namespace csip::qp
