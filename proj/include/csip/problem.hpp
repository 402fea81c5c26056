#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "csip/box_domain.hpp"
#include "csip/polynomial.hpp"
#include "csip/types.hpp"

namespace csip {

/// f(x) = x'Qx + c'x + d with Q symmetric positive semidefinite (row-major).
struct QuadraticForm {
    std::vector<Vec> Q;
    Vec c;
    double d = 0.0;

    double value(std::span<const double> x) const;
    Vec gradient(std::span<const double> x) const;
    /// Lipschitz constant w.r.t. the max-norm on the box: sup ||2Qx + c||_1.
    double lipschitz_bound(const BoxDomain& box) const;
};

struct ConvexObjective {
    std::function<double(std::span<const double>)> value;
    std::function<Vec(std::span<const double>)> subgradient;
    std::optional<double> lipschitz_constant;
    bool strictly_convex = false;
    /// Present when the objective came from (or can be written as) a quadratic form.
    std::optional<QuadraticForm> quadratic;
};

/// Rejects Q with a negative eigenvalue ("objective not convex").
ConvexObjective make_quadratic_objective(QuadraticForm form, const BoxDomain& x_domain);

/// g(x, y) = sum_k a_k(y) x_k + b(y).
struct AffinePolynomialForm {
    std::vector<Polynomial> a;
    Polynomial b;

    Polynomial slice(std::span<const double> x) const;
};

/// Upper bound of g(x, .) over the max-metric box center +- radius, for a
/// fixed x captured by the factory.
using SliceBound = std::function<double(std::span<const double> center, std::span<const double> radius)>;
using SliceBoundFactory = std::function<SliceBound(std::span<const double> x)>;

struct ConstraintFamily {
    int index = 0;
    std::function<double(std::span<const double> x, std::span<const double> y)> value;
    std::function<Vec(std::span<const double> x, std::span<const double> y)> subgradient_x;
    /// Max-metric Lipschitz constant of y -> g(x, y), uniform over x in X.
    double lipschitz_in_y = 0.0;
    /// The linearization at any x is exact (g affine in x).
    bool affine_in_x = false;
    /// Optional sharper range bound; the Lipschitz bound is used otherwise.
    SliceBoundFactory slice_bound;
    std::optional<AffinePolynomialForm> affine_polynomial;
};

ConstraintFamily make_affine_polynomial_family(int index, AffinePolynomialForm form, const BoxDomain& x_domain,
                                               const BoxDomain& y_domain);

/// Max-metric Lipschitz bound of y -> sum_k a_k(y) x_k + b(y) uniformly over X.
double affine_polynomial_lipschitz(const AffinePolynomialForm& form, const BoxDomain& x_domain,
                                   const BoxDomain& y_domain);

struct RegularityBundle {
    double eps_star = 0.0;
    double lipschitz_f = 0.0;
};

/// A convex semi-infinite program over box domains. Immutable once built;
/// construction validates dimensions and, when a Slater point is given,
/// certifies max_i sup_y g_i(slater, y) < 0.
class SipProblem {
public:
    SipProblem(BoxDomain x_domain, BoxDomain y_domain, ConvexObjective objective,
               std::vector<ConstraintFamily> constraints, std::optional<Vec> slater_point = std::nullopt);

    const BoxDomain& x_domain() const { return x_domain_; }
    const BoxDomain& y_domain() const { return y_domain_; }
    const ConvexObjective& objective() const { return objective_; }
    const std::vector<ConstraintFamily>& constraints() const { return constraints_; }
    const std::optional<Vec>& slater_point() const { return slater_point_; }

    std::size_t x_dim() const { return x_domain_.dim(); }
    std::size_t y_dim() const { return y_domain_.dim(); }
    double max_lipschitz_in_y() const;

private:
    BoxDomain x_domain_;
    BoxDomain y_domain_;
    ConvexObjective objective_;
    std::vector<ConstraintFamily> constraints_;
    std::optional<Vec> slater_point_;
};

/// Tolerance used when certifying a Slater point at registration.
inline constexpr double kSlaterCertTol = 1e-9;

/// Dense-grid estimate of max_{i, y} g_i(x, y). The true supremum exceeds
/// the result by at most max_i L_y * grid_resolution.
double feasibility_margin(const SipProblem& problem, std::span<const double> x, double grid_resolution);

/// eps* from the Slater point: -(certified upper bound of max_i sup_y
/// g_i(slater, y)) - oracle_tol. Throws InputError when there is no Slater
/// point or the bound is not negative.
double derive_eps_star(const SipProblem& problem, double oracle_tol);

/// eps* from derive_eps_star and L* from the objective metadata.
RegularityBundle derive_regularity(const SipProblem& problem, double oracle_tol);

}  // namespace csip
