#pragma once

// Brute-force and independent reference computations used by the tests.
// Nothing here calls into the solver internals beyond evaluating g and f.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "csip/problem.hpp"
#include "csip/regression.hpp"

namespace oracle {

using csip::Vec;

/// All points of the tensor grid with n points per axis (endpoints included).
std::vector<Vec> grid_points(const csip::BoxDomain& box, std::size_t per_axis);

/// max over grid points y of g(x, y).
double grid_max(const csip::ConstraintFamily& family, const csip::BoxDomain& y_domain, const Vec& x,
                std::size_t per_axis);

/// max over families and grid points.
double grid_max_all(const csip::SipProblem& problem, const Vec& x, std::size_t per_axis);

struct GridMin {
    Vec x;
    double value = csip::kInf;  ///< +inf when no grid point is feasible
};

/// min f(x) over an X-grid subject to g_i(x, y) <= -eps for the given y points.
GridMin grid_minimize(const csip::SipProblem& problem, const std::vector<Vec>& y_points, double eps,
                      std::size_t per_axis);

/// Dense primal active-set solver for min x'Qx + c'x + d s.t. A x <= b,
/// started from a feasible point. Q must be positive definite.
struct QpSolution {
    bool ok = false;
    Vec x;
    double value = csip::kInf;
    std::size_t iterations = 0;
};

QpSolution active_set_qp(const std::vector<Vec>& Q, const Vec& c, double d, const std::vector<Vec>& A, const Vec& b,
                         Vec start);

/// The discretized restriction of a problem with quadratic objective and
/// affine-in-x families, box bounds included, solved by active_set_qp.
QpSolution discretized_qp(const csip::SipProblem& problem, const std::vector<Vec>& y_points, double eps,
                          const Vec& start);

struct RandomSipOptions {
    std::size_t max_x_dim = 3;
    std::size_t max_y_dim = 2;
    std::size_t max_families = 3;
    int max_degree = 3;
    /// sup_y g_i(slater, y) <= -slack for every family.
    double slack = 1.0;
};

/// Random instance: PD quadratic objective, X = [-2, 2]^p, Y = [0, 1]^q and
/// affine-in-x polynomial-in-y families with a certified Slater point.
csip::SipProblem random_sip(std::mt19937_64& rng, const RandomSipOptions& opt = {});

/// Random polynomial in n variables with per-variable degree <= max_degree.
csip::Polynomial random_polynomial(std::mt19937_64& rng, std::size_t n, int max_degree, double scale = 1.0);

/// Degree-3 fit of 20 noisy samples of u^3 on [0, 1] under v' >= 0.
csip::RegressionSpec noisy_cubic_spec(std::uint64_t seed);

double uniform(std::mt19937_64& rng, double lo, double hi);
std::size_t uniform_index(std::mt19937_64& rng, std::size_t lo, std::size_t hi);

}  // namespace oracle
