#pragma once

#include "csip/problem.hpp"

namespace csip::instances {

/// X = [-2, 2], Y = [0, 1], f(x) = x^2, g(x, y) = x + y - 1, Slater point -2.
/// Optimum x* = 0, f* = 0; min over F_{-eps} is eps^2.
SipProblem instance_a();

/// X = [-3, 3]^2, Y = [0, 1], f(x) = |x|^2, g(x, y) = y x1 + (1 - y) x2 + 1,
/// Slater point (-3, -3). Optimum x* = (-1, -1), f* = 2.
SipProblem instance_b();

/// X = [-2, 2], Y = [0, 1], f(x) = (x - 2)^2 and the quasi-convex, non-convex
/// g(x, y) = x^2 - 1 on [-1, 1], 0 elsewhere. Strictly feasible, yet
/// min over F_{-eps} exceeds min over F_0 by at least 1 for every eps > 0.
SipProblem quasi_convex_fixture();

/// Shorthand for a univariate-or-multivariate polynomial from (exponents, coef) pairs.
Polynomial poly(std::size_t num_vars, std::initializer_list<std::pair<MultiIndex, double>> terms);

}  // namespace csip::instances
