#pragma once

#include <map>
#include <optional>
#include <vector>

#include "csip/problem.hpp"

namespace csip {

/// sum_alpha weights[alpha] * d^alpha v(u) + offset <= 0 for all u in U.
struct ShapeConstraint {
    std::map<MultiIndex, double> weights;
    double offset = 0.0;

    int order() const;
};

struct Observation {
    Vec u;
    double t = 0.0;
};

/// Least-squares fit of v_w(u) = sum_{|beta| <= degree} w_beta u^beta with
/// coefficients w in a box and ridge penalty ridge * |w|^2.
struct RegressionSpec {
    std::vector<Observation> data;
    int degree = 1;
    BoxDomain u_domain = BoxDomain::cube(1, 0.0, 1.0);
    BoxDomain coeff_box = BoxDomain::cube(2, -10.0, 10.0);
    double ridge = 1e-6;
    std::vector<ShapeConstraint> constraints;
    /// Strictly feasible coefficients; searched among w = 0 and the inward-scaled
    /// vertices of the coefficient box when absent.
    std::optional<Vec> slater_point;

    std::size_t input_dim() const { return u_domain.dim(); }
    void validate() const;
};

/// Exponents of the monomial basis: by total degree, descending
/// lexicographic within a degree. For d = 1 this is 1, u, u^2, ...
std::vector<MultiIndex> monomial_basis(std::size_t input_dim, int degree);

/// d^alpha v_w(u) for coefficients w over monomial_basis(u.size(), degree).
double eval_polynomial_derivative(std::span<const double> w, const MultiIndex& alpha, std::span<const double> u,
                                  int degree);

/// Quadratic least-squares objective sum_l (v_w(u_l) - t_l)^2 + ridge |w|^2.
QuadraticForm regression_objective(const RegressionSpec& spec);

/// Constraint i as sum_beta a_beta(u) w_beta + offset.
AffinePolynomialForm shape_constraint_form(const RegressionSpec& spec, const ShapeConstraint& c);

SipProblem build_problem(const RegressionSpec& spec);

/// Two data points (0, 1), (1, 0), degree 1, v' >= 0 on [0, 1], W = [-10, 10]^2.
RegressionSpec regression_instance_r();

}  // namespace csip
