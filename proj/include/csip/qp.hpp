#pragma once

#include <vector>

#include "csip/types.hpp"

namespace csip::qp {

enum class Status { Optimal, Infeasible, NotPositiveDefinite, Breakdown };

const char* to_string(Status s);

struct Result {
    Status status = Status::Breakdown;
    Vec x;
    /// Nonnegative multipliers of the rows of A (zero for inactive rows).
    Vec multipliers;
    /// x'Qx + c'x + d at x.
    double objective = kInf;
    /// Lagrangian dual value at the multipliers: a lower bound of the
    /// optimal value for any nonnegative multipliers.
    double dual_bound = -kInf;
    std::size_t iterations = 0;
};

struct Options {
    std::size_t max_iterations = 10'000;
    /// Relative violation accepted as satisfied.
    double feasibility_tol = 1e-13;
};

/// Strictly convex QP  min x'Qx + c'x + d  s.t.  A x <= b  (Q symmetric
/// positive definite) by the dual active-set method of Goldfarb and Idnani.
class Solver {
public:
    Solver(const std::vector<Vec>& Q, Vec c, double d);

    bool positive_definite() const { return pd_; }
    std::size_t dim() const { return c_.size(); }

    Result solve(const std::vector<Vec>& A, const Vec& b, const Options& options = {}) const;

    /// Lagrangian dual function at multipliers u >= 0.
    double dual_value(const std::vector<Vec>& A, const Vec& b, const Vec& u) const;
    double objective(std::span<const double> x) const;

private:
    std::size_t n_ = 0;
    std::vector<Vec> Q_;
    Vec c_;
    double d_ = 0.0;
    bool pd_ = false;
    /// J = L^{-T} with 2Q = L L' (row-major n x n); J J' = (2Q)^{-1}.
    std::vector<Vec> J0_;
};

}  // namespace csip::qp
