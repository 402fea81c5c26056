#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace oracle {

using csip::kInf;

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::vector<Vec> grid_points(const csip::BoxDomain& box, std::size_t per_axis) {
    const std::size_t q = box.dim();
    std::vector<Vec> out;
    std::vector<std::size_t> idx(q, 0);
    while (true) {
        Vec y(q);
        for (std::size_t j = 0; j < q; ++j) {
            const double t = per_axis == 1 ? 0.5 : static_cast<double>(idx[j]) / static_cast<double>(per_axis - 1);
            y[j] = box.lower(j) + t * box.width(j);
        }
        out.push_back(std::move(y));
        std::size_t j = 0;
        while (j < q && ++idx[j] == per_axis) idx[j++] = 0;
        if (j == q) break;
    }
    return out;
}

double grid_max(const csip::ConstraintFamily& family, const csip::BoxDomain& y_domain, const Vec& x,
                std::size_t per_axis) {
    double best = -kInf;
    for (const auto& y : grid_points(y_domain, per_axis)) best = std::max(best, family.value(x, y));
    return best;
}

double grid_max_all(const csip::SipProblem& problem, const Vec& x, std::size_t per_axis) {
    double best = -kInf;
    for (const auto& fam : problem.constraints()) best = std::max(best, grid_max(fam, problem.y_domain(), x, per_axis));
    return best;
}

GridMin grid_minimize(const csip::SipProblem& problem, const std::vector<Vec>& y_points, double eps,
                      std::size_t per_axis) {
    GridMin best;
    for (const auto& x : grid_points(problem.x_domain(), per_axis)) {
        bool ok = true;
        for (const auto& fam : problem.constraints()) {
            for (const auto& y : y_points) {
                if (fam.value(x, y) > -eps) {
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
        }
        if (!ok) continue;
        const double v = problem.objective().value(x);
        if (v < best.value) {
            best.value = v;
            best.x = x;
        }
    }
    return best;
}

QpSolution active_set_qp(const std::vector<Vec>& Q, const Vec& c, double d, const std::vector<Vec>& A, const Vec& b,
                         Vec start) {
    const std::size_t n = c.size();
    const std::size_t m = A.size();
    Eigen::MatrixXd H(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) H(i, j) = Q[i][j] + Q[j][i];
    Eigen::VectorXd g0 = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(n));
    Eigen::MatrixXd Am(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) Am(i, j) = A[i][j];
    Eigen::VectorXd bv = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(m));
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(start.data(), static_cast<Eigen::Index>(n));

    QpSolution sol;
    if ((Am * x - bv).maxCoeff() > 1e-9) return sol;

    std::vector<std::size_t> work;
    for (std::size_t it = 0; it < 20000; ++it) {
        sol.iterations = it + 1;
        const auto w = static_cast<Eigen::Index>(work.size());
        const auto nn = static_cast<Eigen::Index>(n);
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nn + w, nn + w);
        K.topLeftCorner(nn, nn) = H;
        for (Eigen::Index r = 0; r < w; ++r) {
            K.block(nn + r, 0, 1, nn) = Am.row(static_cast<Eigen::Index>(work[static_cast<std::size_t>(r)]));
            K.block(0, nn + r, nn, 1) = Am.row(static_cast<Eigen::Index>(work[static_cast<std::size_t>(r)])).transpose();
        }
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nn + w);
        rhs.head(nn) = -(H * x + g0);
        Eigen::VectorXd s = K.fullPivLu().solve(rhs);
        Eigen::VectorXd p = s.head(nn);
        Eigen::VectorXd lambda = s.tail(w);

        if (p.lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + x.lpNorm<Eigen::Infinity>())) {
            Eigen::Index worst = -1;
            double most = -1e-12;
            for (Eigen::Index r = 0; r < w; ++r) {
                if (lambda(r) < most) {
                    most = lambda(r);
                    worst = r;
                }
            }
            if (worst < 0) {
                sol.ok = true;
                break;
            }
            work.erase(work.begin() + worst);
            continue;
        }

        double alpha = 1.0;
        std::ptrdiff_t block = -1;
        const Eigen::VectorXd Ap = Am * p;
        const Eigen::VectorXd slack = bv - Am * x;
        for (std::size_t i = 0; i < m; ++i) {
            if (std::find(work.begin(), work.end(), i) != work.end()) continue;
            const auto ii = static_cast<Eigen::Index>(i);
            if (Ap(ii) <= 1e-14) continue;
            const double t = std::max(0.0, slack(ii)) / Ap(ii);
            if (t < alpha) {
                alpha = t;
                block = static_cast<std::ptrdiff_t>(i);
            }
        }
        x += alpha * p;
        if (block >= 0) work.push_back(static_cast<std::size_t>(block));
    }
    sol.x.assign(x.data(), x.data() + n);
    sol.value = d + g0.dot(x) + 0.5 * x.dot(H * x);
    return sol;
}

QpSolution discretized_qp(const csip::SipProblem& problem, const std::vector<Vec>& y_points, double eps,
                          const Vec& start) {
    const auto& q = *problem.objective().quadratic;
    const std::size_t n = problem.x_dim();
    std::vector<Vec> A;
    Vec b;
    for (std::size_t j = 0; j < n; ++j) {
        Vec up(n, 0.0), lo(n, 0.0);
        up[j] = 1.0;
        lo[j] = -1.0;
        A.push_back(up);
        b.push_back(problem.x_domain().upper(j));
        A.push_back(lo);
        b.push_back(-problem.x_domain().lower(j));
    }
    // g(x, y) = a(y)'x + b(y): recover a and b by evaluating at 0 and the unit vectors.
    const Vec zero(n, 0.0);
    for (const auto& fam : problem.constraints()) {
        for (const auto& y : y_points) {
            const double b0 = fam.value(zero, y);
            Vec row(n);
            for (std::size_t j = 0; j < n; ++j) {
                Vec e(n, 0.0);
                e[j] = 1.0;
                row[j] = fam.value(e, y) - b0;
            }
            A.push_back(row);
            b.push_back(-eps - b0);
        }
    }
    return active_set_qp(q.Q, q.c, q.d, A, b, start);
}

csip::Polynomial random_polynomial(std::mt19937_64& rng, std::size_t n, int max_degree, double scale) {
    std::vector<csip::Monomial> terms;
    const std::size_t count = uniform_index(rng, 1, 4);
    for (std::size_t t = 0; t < count; ++t) {
        csip::MultiIndex e(n);
        for (auto& k : e) k = static_cast<int>(uniform_index(rng, 0, static_cast<std::size_t>(max_degree)));
        terms.push_back({e, uniform(rng, -scale, scale)});
    }
    return csip::Polynomial(n, std::move(terms));
}

csip::SipProblem random_sip(std::mt19937_64& rng, const RandomSipOptions& opt) {
    const std::size_t p = uniform_index(rng, 1, opt.max_x_dim);
    const std::size_t q = uniform_index(rng, 1, opt.max_y_dim);
    const std::size_t families = uniform_index(rng, 1, opt.max_families);
    auto X = csip::BoxDomain::cube(p, -2.0, 2.0);
    auto Y = csip::BoxDomain::cube(q, 0.0, 1.0);

    // f(x) = (x - z)'Q(x - z) with Q = M'M + I/2.
    Eigen::MatrixXd M(p, p);
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j) M(i, j) = uniform(rng, -1.0, 1.0);
    Eigen::MatrixXd Qm = M.transpose() * M + 0.5 * Eigen::MatrixXd::Identity(p, p);
    Eigen::VectorXd z(p);
    for (auto& v : z) v = uniform(rng, -2.0, 2.0);
    csip::QuadraticForm form;
    form.Q.assign(p, Vec(p));
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) form.Q[i][j] = Qm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    Eigen::VectorXd cz = -2.0 * Qm * z;
    form.c.assign(cz.data(), cz.data() + p);
    form.d = z.dot(Qm * z);
    auto obj = csip::make_quadratic_objective(form, X);
    obj.strictly_convex = true;

    Vec slater(p);
    for (auto& v : slater) v = uniform(rng, -1.0, 1.0);

    std::vector<csip::ConstraintFamily> fams;
    for (std::size_t i = 0; i < families; ++i) {
        csip::AffinePolynomialForm g;
        for (std::size_t k = 0; k < p; ++k) g.a.push_back(random_polynomial(rng, q, opt.max_degree));
        g.b = random_polynomial(rng, q, opt.max_degree);
        const csip::Polynomial s = g.slice(slater);
        const double L = csip::affine_polynomial_lipschitz(g, X, Y);
        double top = -kInf;
        for (const auto& y : grid_points(Y, 41)) top = std::max(top, s(y));
        const double shift = top + L / 40.0 + opt.slack;
        g.b.add_scaled(csip::Polynomial::constant(q, 1.0), -shift);
        fams.push_back(csip::make_affine_polynomial_family(static_cast<int>(i), std::move(g), X, Y));
    }
    return csip::SipProblem(X, Y, std::move(obj), std::move(fams), slater);
}

csip::RegressionSpec noisy_cubic_spec(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.05);
    csip::RegressionSpec spec;
    spec.degree = 3;
    spec.u_domain = csip::BoxDomain::cube(1, 0.0, 1.0);
    spec.coeff_box = csip::BoxDomain::cube(4, -10.0, 10.0);
    for (int l = 0; l < 20; ++l) {
        const double u = l / 19.0;
        spec.data.push_back({{u}, u * u * u + noise(rng)});
    }
    csip::ShapeConstraint mono;
    mono.weights[{1}] = -1.0;
    spec.constraints.push_back(mono);
    return spec;
}

}  // namespace oracle
