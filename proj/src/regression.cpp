#include "csip/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "csip/lower_level.hpp"

namespace csip {

namespace {

// Candidates beyond this coefficient dimension skip the vertex scan.
constexpr std::size_t kMaxVertexDim = 12;
constexpr double kInwardScale = 0.99;

int total_degree(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

// Coefficient of u^(beta - alpha) in d^alpha u^beta (zero when alpha > beta).
double falling_factor(const MultiIndex& beta, const MultiIndex& alpha) {
    double c = 1.0;
    for (std::size_t j = 0; j < beta.size(); ++j) {
        if (alpha[j] > beta[j]) return 0.0;
        for (int s = 0; s < alpha[j]; ++s) c *= static_cast<double>(beta[j] - s);
    }
    return c;
}

double monomial(std::span<const double> u, const MultiIndex& e) {
    double v = 1.0;
    for (std::size_t j = 0; j < e.size(); ++j) v *= std::pow(u[j], e[j]);
    return v;
}

void check_alpha(const MultiIndex& alpha, std::size_t d, int degree) {
    if (alpha.size() != d) throw InputError("regression: derivative multi-index has wrong dimension");
    for (int a : alpha) {
        if (a < 0) throw InputError("regression: negative derivative order");
    }
    if (total_degree(alpha) > degree) throw InputError("regression: derivative order exceeds the degree");
}

}  // namespace

int ShapeConstraint::order() const {
    int m = 0;
    for (const auto& [alpha, w] : weights) m = std::max(m, total_degree(alpha));
    return m;
}

void RegressionSpec::validate() const {
    if (data.empty()) throw InputError("regression: data must be nonempty");
    if (degree < 0) throw InputError("regression: degree must be >= 0");
    if (!(ridge > 0.0) || !std::isfinite(ridge)) throw InputError("regression: ridge must be finite and > 0");
    const std::size_t d = input_dim();
    if (d == 0) throw InputError("regression: input domain must have dimension >= 1");
    const std::size_t nbar = monomial_basis(d, degree).size();
    if (coeff_box.dim() != nbar)
        throw InputError("regression: coefficient box has dimension " + std::to_string(coeff_box.dim()) +
                         ", basis has " + std::to_string(nbar));
    for (const auto& obs : data) {
        require_dim(obs.u, d, "regression data point");
        if (!std::isfinite(obs.t)) throw InputError("regression: non-finite target");
        for (double v : obs.u) {
            if (!std::isfinite(v)) throw InputError("regression: non-finite input");
        }
    }
    for (const auto& c : constraints) {
        if (c.order() > degree) throw InputError("regression: invalid constraint, derivative order exceeds degree");
        for (const auto& [alpha, w] : c.weights) {
            check_alpha(alpha, d, degree);
            if (!std::isfinite(w)) throw InputError("regression: non-finite constraint weight");
        }
        if (!std::isfinite(c.offset)) throw InputError("regression: non-finite constraint offset");
    }
    if (slater_point) require_dim(*slater_point, nbar, "regression slater point");
}

std::vector<MultiIndex> monomial_basis(std::size_t input_dim, int degree) {
    std::vector<MultiIndex> out;
    for (int deg = 0; deg <= degree; ++deg) {
        std::vector<MultiIndex> level;
        MultiIndex e(input_dim, 0);
        // Enumerate compositions of deg into input_dim parts.
        auto rec = [&](auto&& self, std::size_t j, int left) -> void {
            if (j + 1 == input_dim) {
                e[j] = left;
                level.push_back(e);
                return;
            }
            for (int v = left; v >= 0; --v) {
                e[j] = v;
                self(self, j + 1, left - v);
            }
        };
        if (input_dim > 0) rec(rec, 0, deg);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

double eval_polynomial_derivative(std::span<const double> w, const MultiIndex& alpha, std::span<const double> u,
                                  int degree) {
    const std::size_t d = u.size();
    check_alpha(alpha, d, degree);
    const auto basis = monomial_basis(d, degree);
    require_dim(w, basis.size(), "regression coefficients");
    double s = 0.0;
    MultiIndex rest(d);
    for (std::size_t b = 0; b < basis.size(); ++b) {
        const double c = falling_factor(basis[b], alpha);
        if (c == 0.0 || w[b] == 0.0) continue;
        for (std::size_t j = 0; j < d; ++j) rest[j] = basis[b][j] - alpha[j];
        s += w[b] * c * monomial(u, rest);
    }
    return s;
}

QuadraticForm regression_objective(const RegressionSpec& spec) {
    const auto basis = monomial_basis(spec.input_dim(), spec.degree);
    const std::size_t n = basis.size();
    QuadraticForm q;
    q.Q.assign(n, Vec(n, 0.0));
    q.c.assign(n, 0.0);
    q.d = 0.0;
    Vec phi(n);
    for (const auto& obs : spec.data) {
        for (std::size_t b = 0; b < n; ++b) phi[b] = monomial(obs.u, basis[b]);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) q.Q[i][j] += phi[i] * phi[j];
            q.c[i] -= 2.0 * obs.t * phi[i];
        }
        q.d += obs.t * obs.t;
    }
    for (std::size_t i = 0; i < n; ++i) q.Q[i][i] += spec.ridge;
    return q;
}

AffinePolynomialForm shape_constraint_form(const RegressionSpec& spec, const ShapeConstraint& c) {
    const std::size_t d = spec.input_dim();
    const auto basis = monomial_basis(d, spec.degree);
    AffinePolynomialForm form;
    form.a.reserve(basis.size());
    for (const auto& beta : basis) {
        std::vector<Monomial> terms;
        for (const auto& [alpha, weight] : c.weights) {
            const double f = falling_factor(beta, alpha);
            if (f == 0.0 || weight == 0.0) continue;
            MultiIndex e(d);
            for (std::size_t j = 0; j < d; ++j) e[j] = beta[j] - alpha[j];
            terms.push_back({std::move(e), weight * f});
        }
        form.a.emplace_back(d, std::move(terms));
    }
    form.b = Polynomial::constant(d, c.offset);
    return form;
}

SipProblem build_problem(const RegressionSpec& spec) {
    spec.validate();
    const BoxDomain& W = spec.coeff_box;
    const BoxDomain& U = spec.u_domain;
    ConvexObjective obj = make_quadratic_objective(regression_objective(spec), W);
    obj.strictly_convex = true;

    std::vector<ConstraintFamily> fams;
    for (std::size_t i = 0; i < spec.constraints.size(); ++i)
        fams.push_back(make_affine_polynomial_family(static_cast<int>(i), shape_constraint_form(spec, spec.constraints[i]), W, U));
    if (fams.empty()) return SipProblem(W, U, std::move(obj), std::move(fams), W.center());

    if (spec.slater_point) return SipProblem(W, U, std::move(obj), std::move(fams), spec.slater_point);

    // Strict feasibility: w = 0 and the inward-scaled vertices of W.
    SipProblem unchecked(W, U, obj, fams);
    std::vector<Vec> candidates{Vec(W.dim(), 0.0)};
    if (W.dim() <= kMaxVertexDim) {
        const Vec center = W.center();
        for (std::size_t mask = 0; mask < (std::size_t{1} << W.dim()); ++mask) {
            Vec v(W.dim());
            for (std::size_t j = 0; j < W.dim(); ++j) {
                const double corner = (mask >> j) & 1 ? W.upper(j) : W.lower(j);
                v[j] = center[j] + kInwardScale * (corner - center[j]);
            }
            candidates.push_back(std::move(v));
        }
    }
    std::optional<Vec> best;
    double best_bound = 0.0;
    for (const auto& w : candidates) {
        if (!W.contains(w, 0.0)) continue;
        const double bound = certified_violation_bound(unchecked, w, kSlaterCertTol);
        if (bound < best_bound) {
            best_bound = bound;
            best = w;
        }
    }
    if (!best) throw InputError("regression: no strictly feasible coefficient vector found; supply a slater point");
    return SipProblem(W, U, std::move(obj), std::move(fams), best);
}

RegressionSpec regression_instance_r() {
    RegressionSpec s;
    s.data = {{{0.0}, 1.0}, {{1.0}, 0.0}};
    s.degree = 1;
    s.u_domain = BoxDomain::cube(1, 0.0, 1.0);
    s.coeff_box = BoxDomain::cube(2, -10.0, 10.0);
    s.ridge = 1e-6;
    s.constraints = {ShapeConstraint{{{MultiIndex{1}, -1.0}}, 0.0}};
    return s;
}

}  // namespace csip
