#include "csip/problem.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>

#include "csip/lower_level.hpp"

namespace csip {

namespace {

// Relative eigenvalue slack of the convexity gate.
constexpr double kConvexityTol = 1e-12;

std::pair<double, double> symmetric_eigen_range(const std::vector<Vec>& Q) {
    const auto n = static_cast<Eigen::Index>(Q.size());
    if (n == 0) return {0.0, 0.0};
    Eigen::MatrixXd S(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            S(i, j) = 0.5 * (Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                             Q[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

}  // namespace

double QuadraticForm::value(std::span<const double> x) const {
    double s = d + dot(c, x);
    for (std::size_t i = 0; i < Q.size(); ++i) s += x[i] * dot(Q[i], x);
    return s;
}

Vec QuadraticForm::gradient(std::span<const double> x) const {
    Vec g(c);
    for (std::size_t i = 0; i < Q.size(); ++i) {
        for (std::size_t j = 0; j < Q.size(); ++j) g[i] += (Q[i][j] + Q[j][i]) * x[j];
    }
    return g;
}

double QuadraticForm::lipschitz_bound(const BoxDomain& box) const {
    double total = 0.0;
    for (std::size_t i = 0; i < Q.size(); ++i) {
        double row = std::abs(c[i]);
        for (std::size_t j = 0; j < Q.size(); ++j) row += std::abs(Q[i][j] + Q[j][i]) * box.abs_bound(j);
        total += row;
    }
    return total;
}

ConvexObjective make_quadratic_objective(QuadraticForm form, const BoxDomain& x_domain) {
    const std::size_t p = x_domain.dim();
    if (form.Q.size() != p || form.c.size() != p) throw InputError("objective: Q/c dimension mismatch with x domain");
    for (const auto& row : form.Q) {
        if (row.size() != p) throw InputError("objective: Q must be square");
    }
    for (std::size_t i = 0; i < p; ++i) {
        if (!std::isfinite(form.c[i])) throw InputError("objective: non-finite c");
        for (std::size_t j = 0; j < p; ++j) {
            if (!std::isfinite(form.Q[i][j])) throw InputError("objective: non-finite Q");
        }
    }
    if (!std::isfinite(form.d)) throw InputError("objective: non-finite d");
    const auto [lo, hi] = symmetric_eigen_range(form.Q);
    const double tol = kConvexityTol * std::max(1.0, std::abs(hi));
    if (lo < -tol)
        throw InputError("objective not convex: Q has eigenvalue " + std::to_string(lo));
    ConvexObjective obj;
    obj.strictly_convex = lo > tol;
    obj.lipschitz_constant = form.lipschitz_bound(x_domain);
    auto shared = std::make_shared<const QuadraticForm>(form);
    obj.value = [shared](std::span<const double> x) { return shared->value(x); };
    obj.subgradient = [shared](std::span<const double> x) { return shared->gradient(x); };
    obj.quadratic = std::move(form);
    return obj;
}

Polynomial AffinePolynomialForm::slice(std::span<const double> x) const {
    Polynomial p = b;
    for (std::size_t k = 0; k < a.size(); ++k) p.add_scaled(a[k], x[k]);
    return p;
}

double affine_polynomial_lipschitz(const AffinePolynomialForm& form, const BoxDomain& x_domain,
                                   const BoxDomain& y_domain) {
    double total = 0.0;
    for (std::size_t j = 0; j < y_domain.dim(); ++j) {
        double axis = form.b.partial(j).abs_bound(y_domain);
        for (std::size_t k = 0; k < form.a.size(); ++k) {
            axis += form.a[k].partial(j).abs_bound(y_domain) * x_domain.abs_bound(k);
        }
        total += axis;
    }
    return total;
}

ConstraintFamily make_affine_polynomial_family(int index, AffinePolynomialForm form, const BoxDomain& x_domain,
                                               const BoxDomain& y_domain) {
    const std::size_t p = x_domain.dim();
    const std::size_t q = y_domain.dim();
    if (form.a.size() != p) throw InputError("constraint: number of a_k polynomials must equal x dimension");
    for (const auto& ak : form.a) {
        if (ak.num_vars() != q) throw InputError("constraint: a_k polynomial must be in y variables");
    }
    if (form.b.num_vars() != q) throw InputError("constraint: b polynomial must be in y variables");

    ConstraintFamily fam;
    fam.index = index;
    fam.affine_in_x = true;
    fam.lipschitz_in_y = affine_polynomial_lipschitz(form, x_domain, y_domain);
    auto shared = std::make_shared<const AffinePolynomialForm>(form);
    fam.value = [shared](std::span<const double> x, std::span<const double> y) {
        double s = shared->b(y);
        for (std::size_t k = 0; k < shared->a.size(); ++k) s += shared->a[k](y) * x[k];
        return s;
    };
    fam.subgradient_x = [shared](std::span<const double>, std::span<const double> y) {
        Vec s(shared->a.size());
        for (std::size_t k = 0; k < s.size(); ++k) s[k] = shared->a[k](y);
        return s;
    };
    fam.slice_bound = [shared](std::span<const double> x) -> SliceBound {
        auto dense = std::make_shared<const DensePolynomial>(shared->slice(x));
        return [dense](std::span<const double> c, std::span<const double> r) {
            return dense->centered_upper_bound(c, r);
        };
    };
    fam.affine_polynomial = std::move(form);
    return fam;
}

SipProblem::SipProblem(BoxDomain x_domain, BoxDomain y_domain, ConvexObjective objective,
                       std::vector<ConstraintFamily> constraints, std::optional<Vec> slater_point)
    : x_domain_(std::move(x_domain)),
      y_domain_(std::move(y_domain)),
      objective_(std::move(objective)),
      constraints_(std::move(constraints)),
      slater_point_(std::move(slater_point)) {
    if (x_domain_.dim() == 0 || y_domain_.dim() == 0) throw InputError("problem: empty domain");
    if (!objective_.value || !objective_.subgradient) throw InputError("problem: objective oracles missing");
    if (objective_.lipschitz_constant && !(*objective_.lipschitz_constant > 0.0))
        throw InputError("problem: objective Lipschitz constant must be positive");
    if (constraints_.empty()) throw InputError("problem: at least one constraint family is required");
    std::set<int> seen;
    for (const auto& fam : constraints_) {
        if (!fam.value || !fam.subgradient_x) throw InputError("problem: constraint oracles missing");
        if (!seen.insert(fam.index).second) throw InputError("problem: duplicate constraint index");
        if (!std::isfinite(fam.lipschitz_in_y) || fam.lipschitz_in_y < 0.0)
            throw InputError("problem: constraint Lipschitz constant must be finite and nonnegative");
    }
    std::sort(constraints_.begin(), constraints_.end(),
              [](const ConstraintFamily& a, const ConstraintFamily& b) { return a.index < b.index; });
    if (slater_point_) {
        require_dim(*slater_point_, x_domain_.dim(), "slater point");
        if (!x_domain_.contains(*slater_point_)) throw InputError("problem: slater point outside x domain");
        const double bound = certified_violation_bound(*this, *slater_point_, kSlaterCertTol);
        if (!(bound < 0.0)) {
            throw InputError("problem: slater certificate failed (max_i sup_y g_i = " + std::to_string(bound) +
                             " is not negative)");
        }
    }
}

double SipProblem::max_lipschitz_in_y() const {
    double m = 0.0;
    for (const auto& fam : constraints_) m = std::max(m, fam.lipschitz_in_y);
    return m;
}

double feasibility_margin(const SipProblem& problem, std::span<const double> x, double grid_resolution) {
    require_dim(x, problem.x_dim(), "feasibility_margin point");
    if (!(grid_resolution > 0.0)) throw InputError("feasibility_margin: grid resolution must be positive");
    const BoxDomain& Y = problem.y_domain();
    const std::size_t q = Y.dim();
    std::vector<std::size_t> counts(q);
    double total = 1.0;
    for (std::size_t j = 0; j < q; ++j) {
        counts[j] = Y.width(j) > 0.0 ? static_cast<std::size_t>(std::ceil(Y.width(j) / grid_resolution)) + 1 : 1;
        total *= static_cast<double>(counts[j]);
    }
    if (total > 5e8) throw InputError("feasibility_margin: grid too fine for the y dimension");

    double worst = -kInf;
    std::vector<std::size_t> idx(q, 0);
    Vec y(q);
    while (true) {
        for (std::size_t j = 0; j < q; ++j) {
            y[j] = counts[j] == 1 ? Y.lower(j)
                                  : Y.lower(j) + Y.width(j) * static_cast<double>(idx[j]) /
                                                     static_cast<double>(counts[j] - 1);
        }
        for (const auto& fam : problem.constraints()) worst = std::max(worst, fam.value(x, y));
        std::size_t j = q;
        while (j-- > 0) {
            if (++idx[j] < counts[j]) break;
            idx[j] = 0;
        }
        if (j == static_cast<std::size_t>(-1)) break;
    }
    return worst;
}

double derive_eps_star(const SipProblem& problem, double oracle_tol) {
    if (!problem.slater_point()) throw InputError("derive_eps_star: no strict feasibility evidence (no slater point)");
    if (!(oracle_tol > 0.0)) throw InputError("derive_eps_star: oracle tolerance must be positive");
    const double bound = certified_violation_bound(problem, *problem.slater_point(), oracle_tol);
    const double eps_star = -bound - oracle_tol;
    if (!(bound < 0.0) || !(eps_star > 0.0)) {
        throw InputError("derive_eps_star: no strict feasibility evidence (certified bound " + std::to_string(bound) +
                         ")");
    }
    return eps_star;
}

RegularityBundle derive_regularity(const SipProblem& problem, double oracle_tol) {
    if (!problem.objective().lipschitz_constant)
        throw InputError("derive_regularity: objective has no Lipschitz constant");
    return RegularityBundle{derive_eps_star(problem, oracle_tol), *problem.objective().lipschitz_constant};
}

}  // namespace csip
