#include "csip/instances.hpp"

#include <cmath>

namespace csip::instances {

Polynomial poly(std::size_t num_vars, std::initializer_list<std::pair<MultiIndex, double>> terms) {
    std::vector<Monomial> ms;
    for (const auto& [e, c] : terms) ms.push_back(Monomial{e, c});
    return Polynomial(num_vars, std::move(ms));
}

SipProblem instance_a() {
    BoxDomain X({-2.0}, {2.0});
    BoxDomain Y({0.0}, {1.0});
    QuadraticForm q{{{1.0}}, {0.0}, 0.0};
    auto obj = make_quadratic_objective(q, X);
    obj.strictly_convex = true;
    AffinePolynomialForm g{{poly(1, {{{0}, 1.0}})}, poly(1, {{{1}, 1.0}, {{0}, -1.0}})};
    std::vector<ConstraintFamily> fams{make_affine_polynomial_family(0, std::move(g), X, Y)};
    return SipProblem(X, Y, std::move(obj), std::move(fams), Vec{-2.0});
}

SipProblem instance_b() {
    BoxDomain X({-3.0, -3.0}, {3.0, 3.0});
    BoxDomain Y({0.0}, {1.0});
    QuadraticForm q{{{1.0, 0.0}, {0.0, 1.0}}, {0.0, 0.0}, 0.0};
    auto obj = make_quadratic_objective(q, X);
    obj.strictly_convex = true;
    AffinePolynomialForm g{{poly(1, {{{1}, 1.0}}), poly(1, {{{0}, 1.0}, {{1}, -1.0}})}, poly(1, {{{0}, 1.0}})};
    std::vector<ConstraintFamily> fams{make_affine_polynomial_family(0, std::move(g), X, Y)};
    return SipProblem(X, Y, std::move(obj), std::move(fams), Vec{-3.0, -3.0});
}

SipProblem quasi_convex_fixture() {
    BoxDomain X({-2.0}, {2.0});
    BoxDomain Y({0.0}, {1.0});
    QuadraticForm q{{{1.0}}, {-4.0}, 4.0};
    auto obj = make_quadratic_objective(q, X);
    obj.strictly_convex = true;
    ConstraintFamily g;
    g.index = 0;
    g.lipschitz_in_y = 0.0;
    g.value = [](std::span<const double> x, std::span<const double>) {
        return std::abs(x[0]) <= 1.0 ? x[0] * x[0] - 1.0 : 0.0;
    };
    g.subgradient_x = [](std::span<const double> x, std::span<const double>) {
        return Vec{std::abs(x[0]) <= 1.0 ? 2.0 * x[0] : 0.0};
    };
    return SipProblem(X, Y, std::move(obj), {std::move(g)}, Vec{0.0});
}

}  // namespace csip::instances
