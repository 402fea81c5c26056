#include <doctest.h>

#include <cmath>
#include <random>

#include "csip/finite_solver.hpp"
#include "csip/instances.hpp"
#include "csip/qp.hpp"
#include "csip/simplex.hpp"
#include "oracles.hpp"

using namespace csip;

namespace {

DiscretizedProblem make_dp(const SipProblem& p, double eps, std::vector<Vec> pts) {
    return DiscretizedProblem{&p, eps, Discretization(std::move(pts))};
}

// min c'v over {A v <= b} in two variables by enumerating vertices.
double vertex_enumeration(const Vec& c, const std::vector<Vec>& A, const Vec& b) {
    double best = kInf;
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t j = i + 1; j < A.size(); ++j) {
            const double det = A[i][0] * A[j][1] - A[i][1] * A[j][0];
            if (std::abs(det) < 1e-12) continue;
            const Vec v{(b[i] * A[j][1] - A[i][1] * b[j]) / det, (A[i][0] * b[j] - b[i] * A[j][0]) / det};
            bool ok = true;
            for (std::size_t k = 0; k < A.size() && ok; ++k) ok = A[k][0] * v[0] + A[k][1] * v[1] <= b[k] + 1e-9;
            if (ok) best = std::min(best, c[0] * v[0] + c[1] * v[1]);
        }
    }
    return best;
}

}  // namespace

TEST_CASE("simplex: small inequality LP") {
    auto r = lp::solve_inequality({-1.0, -1.0}, {{1.0, 2.0}, {3.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}},
                                  {4.0, 6.0, 0.0, 0.0});
    REQUIRE(r.status == lp::Status::Optimal);
    CHECK(r.v[0] == doctest::Approx(1.6));
    CHECK(r.v[1] == doctest::Approx(1.2));
    CHECK(r.objective == doctest::Approx(-2.8));
    CHECK(r.multipliers[0] == doctest::Approx(0.4));
    CHECK(r.multipliers[1] == doctest::Approx(0.2));
}

TEST_CASE("simplex: infeasible and unbounded") {
    auto inf = lp::solve_inequality({1.0}, {{1.0}, {-1.0}}, {-1.0, 0.0});
    CHECK(inf.status == lp::Status::Infeasible);
    auto unb = lp::solve_inequality({-1.0}, {{-1.0}}, {0.0});
    CHECK(unb.status == lp::Status::Unbounded);
}

TEST_CASE("simplex: degenerate problem that cycles under Dantzig's rule") {
    lp::StandardForm f;
    f.M = {{1, 0, 0, 0.25, -60, -1.0 / 25, 9}, {0, 1, 0, 0.5, -90, -1.0 / 50, 3}, {0, 0, 1, 0, 0, 1, 0}};
    f.rhs = {0, 0, 1};
    f.cost = {0, 0, 0, -0.75, 150, -1.0 / 50, 6};
    auto r = lp::solve_standard(f);
    REQUIRE(r.status == lp::Status::Optimal);
    CHECK(r.objective == doctest::Approx(-0.05));
}

TEST_CASE("simplex: random two-variable LPs against vertex enumeration") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Vec> A{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        Vec b{3, 3, 3, 3};
        const std::size_t extra = oracle::uniform_index(rng, 0, 6);
        for (std::size_t k = 0; k < extra; ++k) {
            A.push_back({oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1)});
            b.push_back(oracle::uniform(rng, -1, 2));
        }
        const Vec c{oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1)};
        auto r = lp::solve_inequality(c, A, b);
        const double ref = vertex_enumeration(c, A, b);
        if (std::isinf(ref)) {
            CHECK(r.status == lp::Status::Infeasible);
        } else {
            REQUIRE(r.status == lp::Status::Optimal);
            CHECK(r.objective == doctest::Approx(ref).epsilon(1e-8));
            for (std::size_t k = 0; k < A.size(); ++k) CHECK(A[k][0] * r.v[0] + A[k][1] * r.v[1] <= b[k] + 1e-8);
        }
    }
}

TEST_CASE("qp: KKT conditions and agreement with a primal active-set solve") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = oracle::uniform_index(rng, 1, 4);
        const std::size_t m = oracle::uniform_index(rng, 1, 12);
        std::vector<Vec> M(n, Vec(n));
        for (auto& row : M)
            for (auto& v : row) v = oracle::uniform(rng, -1, 1);
        std::vector<Vec> Q(n, Vec(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t k = 0; k < n; ++k) Q[i][j] += M[k][i] * M[k][j];
                if (i == j) Q[i][j] += 0.1;
            }
        Vec c(n);
        for (auto& v : c) v = oracle::uniform(rng, -3, 3);
        // Constraints strictly satisfied at the origin.
        std::vector<Vec> A(m, Vec(n));
        Vec b(m);
        for (std::size_t i = 0; i < m; ++i) {
            for (auto& v : A[i]) v = oracle::uniform(rng, -1, 1);
            b[i] = oracle::uniform(rng, 0.1, 1.0);
        }
        qp::Solver s(Q, c, 0.5);
        REQUIRE(s.positive_definite());
        auto r = s.solve(A, b);
        REQUIRE(r.status == qp::Status::Optimal);
        Vec grad(n);
        for (std::size_t i = 0; i < n; ++i) {
            grad[i] = c[i];
            for (std::size_t j = 0; j < n; ++j) grad[i] += (Q[i][j] + Q[j][i]) * r.x[j];
        }
        for (std::size_t i = 0; i < m; ++i) {
            const double slack = b[i] - dot(A[i], r.x);
            CHECK(slack >= -1e-9);
            CHECK(r.multipliers[i] >= 0.0);
            CHECK(r.multipliers[i] * slack == doctest::Approx(0.0).epsilon(1e-8).scale(1.0));
            for (std::size_t j = 0; j < n; ++j) grad[j] += r.multipliers[i] * A[i][j];
        }
        CHECK(max_norm(grad) <= 1e-8);
        CHECK(r.dual_bound <= r.objective + 1e-9);
        CHECK(r.objective - r.dual_bound <= 1e-8 * (1.0 + std::abs(r.objective)));
        auto ref = oracle::active_set_qp(Q, c, 0.5, A, b, Vec(n, 0.0));
        REQUIRE(ref.ok);
        CHECK(r.objective == doctest::Approx(ref.value).epsilon(1e-9));
    }
}

TEST_CASE("qp: infeasible and indefinite inputs") {
    qp::Solver s({{1.0}}, {0.0}, 0.0);
    auto r = s.solve({{1.0}, {-1.0}}, {-1.0, 0.0});
    CHECK(r.status == qp::Status::Infeasible);
    qp::Solver bad({{0.0}}, {1.0}, 0.0);
    CHECK_FALSE(bad.positive_definite());
    CHECK(bad.solve({{1.0}}, {1.0}).status == qp::Status::NotPositiveDefinite);
}

TEST_CASE("discretization: dedup, membership and grids") {
    Discretization d;
    CHECK(d.add({0.5}));
    CHECK_FALSE(d.add({0.5 + 1e-13}));
    CHECK(d.add({0.6}));
    CHECK(d.size() == 2);
    CHECK(d.contains(Vec{0.6}));
    CHECK_FALSE(d.contains(Vec{0.7}));
    CHECK_THROWS_AS(Discretization(std::vector<Vec>{{2.0}}).check_within(BoxDomain({0.0}, {1.0})), InputError);
    auto g = Discretization::uniform_grid(BoxDomain::cube(2, 0.0, 1.0), 3);
    CHECK(g.size() == 9);
    CHECK(g.contains(Vec{0.5, 1.0}));
    auto c = Discretization::uniform_grid(BoxDomain({0.0}, {1.0}), 1);
    CHECK(c.points() == std::vector<Vec>{{0.5}});
}

TEST_CASE("solve_discretized examples on instance A") {
    auto a = instances::instance_a();
    auto r1 = solve_discretized(make_dp(a, 0.1, {{1.0}}), 1e-8);
    REQUIRE(r1.status == SolveStatus::Feasible);
    CHECK(r1.x[0] == doctest::Approx(-0.1).epsilon(1e-6));
    CHECK(r1.upper == doctest::Approx(0.01).epsilon(1e-6));
    auto r2 = solve_discretized(make_dp(a, 0.1, {{0.0}}), 1e-8);
    REQUIRE(r2.status == SolveStatus::Feasible);
    CHECK(std::abs(r2.x[0]) <= 1e-4);
    CHECK(r2.upper <= 1e-8);
    auto r3 = solve_discretized(make_dp(a, 4.0, {{1.0}}), 1e-8);
    CHECK(r3.status == SolveStatus::Infeasible);
}

TEST_CASE("solve_discretized with no points minimizes over X") {
    auto b = instances::instance_b();
    auto r = solve_discretized(make_dp(b, 0.5, {}), 1e-10);
    REQUIRE(r.status == SolveStatus::Feasible);
    CHECK(r.upper <= 1e-10);
}

TEST_CASE("check_feasibility examples") {
    auto a = instances::instance_a();
    CHECK(check_feasibility(make_dp(a, 4.0, {{1.0}})) == SolveStatus::Infeasible);
    CHECK(check_feasibility(make_dp(a, 2.0, {{1.0}})) == SolveStatus::Feasible);
    CHECK(check_feasibility(make_dp(a, 2.0 + 1e-6, {{1.0}})) == SolveStatus::Infeasible);
    auto b = instances::instance_b();
    CHECK(check_feasibility(make_dp(b, 1.0, {{0.0}, {1.0}})) == SolveStatus::Feasible);
}

TEST_CASE("certificate sandwich on random instances") {
    std::mt19937_64 rng(31);
    for (bool force_lp : {false, true}) {
        for (int trial = 0; trial < 100; ++trial) {
            auto p = oracle::random_sip(rng);
            std::vector<Vec> pts;
            const std::size_t count = oracle::uniform_index(rng, 1, 8);
            for (std::size_t k = 0; k < count; ++k) {
                Vec y(p.y_dim());
                for (auto& v : y) v = oracle::uniform(rng, 0.0, 1.0);
                pts.push_back(y);
            }
            const double eps = oracle::uniform(rng, 0.0, 0.5);
            const double delta_bar = std::pow(10.0, -oracle::uniform(rng, 2.0, 8.0));
            FiniteSolverOptions opt;
            opt.force_lp_master = force_lp;
            auto r = solve_discretized(make_dp(p, eps, pts), delta_bar, opt);
            REQUIRE(r.status == SolveStatus::Feasible);
            const auto ref = oracle::discretized_qp(p, pts, eps, *p.slater_point());
            REQUIRE(ref.ok);
            const double tol = 1e-9 * (1.0 + std::abs(ref.value));
            CHECK(r.lower <= ref.value + tol);
            CHECK(ref.value <= r.upper + tol);
            CHECK(r.upper - r.lower <= r.gap_target);
            CHECK(r.gap_target == doctest::Approx(std::max(delta_bar, kGapFloor * std::max(1.0, std::abs(r.upper)))));
            for (const auto& fam : p.constraints())
                for (const auto& y : pts) CHECK(fam.value(r.x, y) <= -eps + kFeasTol);
            if (p.x_dim() <= 2) {
                const auto grid = oracle::grid_minimize(p, pts, eps, p.x_dim() == 1 ? 4001 : 201);
                CHECK(r.upper <= grid.value + r.gap_target + tol);
            }
        }
    }
}

TEST_CASE("linear master handles nonsmooth objectives") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 30; ++trial) {
        auto base = oracle::random_sip(rng, {2, 1, 2, 2, 1.0});
        Vec z(base.x_dim());
        for (auto& v : z) v = oracle::uniform(rng, -2.0, 2.0);
        ConvexObjective f;
        f.value = [z](std::span<const double> x) {
            double s = 0.0;
            for (std::size_t j = 0; j < z.size(); ++j) s += std::abs(x[j] - z[j]);
            return s;
        };
        f.subgradient = [z](std::span<const double> x) {
            Vec g(z.size());
            for (std::size_t j = 0; j < z.size(); ++j) g[j] = x[j] >= z[j] ? 1.0 : -1.0;
            return g;
        };
        f.lipschitz_constant = static_cast<double>(z.size());
        SipProblem p(base.x_domain(), base.y_domain(), f, base.constraints(), base.slater_point());
        const std::vector<Vec> pts{{0.0}, {0.5}, {1.0}};
        auto r = solve_discretized(make_dp(p, 0.2, pts), 1e-6);
        REQUIRE(r.status == SolveStatus::Feasible);
        const auto grid = oracle::grid_minimize(p, pts, 0.2, p.x_dim() == 1 ? 40001 : 401);
        CHECK(r.lower <= grid.value + 1e-9);
        CHECK(r.upper <= grid.value + r.gap_target + 1e-9);
    }
}

TEST_CASE("relaxation monotonicity") {
    auto a = instances::instance_a();
    auto b = instances::instance_b();
    for (const SipProblem* p : {&a, &b}) {
        double prev = -kInf;
        std::vector<Vec> pts;
        for (double y : {0.5, 0.0, 1.0, 0.25}) {
            pts.push_back({y});
            auto r = solve_discretized(make_dp(*p, 0.3, pts), 1e-10);
            REQUIRE(r.status == SolveStatus::Feasible);
            CHECK(r.upper >= prev - 1e-9);
            prev = r.upper;
        }
        double last = kInf;
        for (double eps : {1.0, 0.5, 0.1, 0.0}) {
            auto r = solve_discretized(make_dp(*p, eps, pts), 1e-10);
            REQUIRE(r.status == SolveStatus::Feasible);
            CHECK(r.upper <= last + 1e-9);
            last = r.upper;
        }
    }
}

TEST_CASE("conservative feasibility check") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        auto p = oracle::random_sip(rng);
        std::vector<Vec> pts{Vec(p.y_dim(), 0.5), Vec(p.y_dim(), 1.0)};
        // eps above sup |g| over X x Y leaves nothing feasible.
        double bound = 0.0;
        for (const auto& fam : p.constraints()) {
            const auto& form = *fam.affine_polynomial;
            double s = form.b.abs_bound(p.y_domain());
            for (const auto& a : form.a) s += 2.0 * a.abs_bound(p.y_domain());
            bound = std::max(bound, s);
        }
        CHECK(check_feasibility(make_dp(p, bound + 1e-3, pts)) == SolveStatus::Infeasible);
        CHECK(check_feasibility(make_dp(p, 0.5, pts)) == SolveStatus::Feasible);
    }
}
