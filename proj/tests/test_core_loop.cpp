#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "csip/core_loop.hpp"
#include "csip/instances.hpp"
#include "oracles.hpp"

using namespace csip;

namespace {

// delta_bar = 1e-8 and delta_{k,i} = 1e-3 over the first iterations.
ToleranceSchedule fixed_early_schedule() {
    return ToleranceSchedule([](std::size_t) { return 1e-8; },
                             [](std::size_t k, int) { return k < 100 ? 1e-3 : 1e-3 * std::pow(0.5, double(k - 100)); },
                             Regime::EventuallyZero, 1000);
}

CoreConfig config(double eps, double rho, std::vector<Vec> y0, ToleranceSchedule s = ToleranceSchedule::eventually_zero(0)) {
    CoreConfig cfg;
    cfg.eps = eps;
    cfg.rho = rho;
    cfg.schedule = std::move(s);
    cfg.y0 = Discretization(std::move(y0));
    return cfg;
}

CertifiedMax violator_at(Vec y, double value) {
    CertifiedMax v;
    v.y_star = std::move(y);
    v.value = value;
    return v;
}

}  // namespace

TEST_CASE("schedule presets") {
    auto g = ToleranceSchedule::geometric(0.2, 0.5);
    CHECK(g.obj(0) == doctest::Approx(0.2));
    CHECK(g.obj(3) == doctest::Approx(0.025));
    CHECK(g.aux(0, 0) == doctest::Approx(0.1));
    CHECK(g.aux(200, 0) == kAuxFloor);
    CHECK(g.sup_obj() == doctest::Approx(0.2));
    auto e = ToleranceSchedule::eventually_zero(3, 0.4);
    CHECK(e.obj(2) == doctest::Approx(0.1));
    CHECK(e.obj(3) == 0.0);
    CHECK(e.sup_obj() == doctest::Approx(0.4));
    auto s = e.shifted(2);
    CHECK(s.obj(0) == doctest::Approx(0.1));
    CHECK(s.obj(1) == 0.0);
    CHECK(s.k0() == 1);
    auto p = ToleranceSchedule::parse("geometric(0.25)", 1.0);
    CHECK(p.obj(1) == doctest::Approx(0.25));
    CHECK(ToleranceSchedule::parse("eventually_zero(4)", 1.0).regime() == Regime::EventuallyZero);
    CHECK_THROWS_AS(ToleranceSchedule::parse("harmonic", 1.0), ConfigError);
    CHECK_THROWS_AS(ToleranceSchedule::geometric(1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(ToleranceSchedule::constant(0.1).validate(), ConfigError);
    CHECK_NOTHROW(ToleranceSchedule::constant(0.0).validate());
}

TEST_CASE("update_discretization examples") {
    auto a = instances::instance_a();
    const Discretization yk(std::vector<Vec>{{0.0}});
    const auto v = violator_at({1.0}, 0.0);
    auto r0 = update_discretization(a, yk, Vec{0.0}, 0.1, 0.0, v);
    CHECK(r0.points() == std::vector<Vec>{{1.0}});
    auto rinf = update_discretization(a, yk, Vec{0.0}, 0.1, kInf, v);
    CHECK(rinf.size() == 2);
    CHECK(rinf.contains(Vec{0.0}));
    CHECK(rinf.contains(Vec{1.0}));
    auto rmid = update_discretization(a, yk, Vec{0.0}, 0.1, 0.95, v);
    CHECK(rmid.size() == 2);
    auto bound = update_discretization(a, yk, Vec{0.0}, 0.1, 0.0, v, 0, 0, {true});
    CHECK(bound.size() == 2);
}

TEST_CASE("update_discretization: superset rule and pruning soundness") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = oracle::random_sip(rng);
        Discretization yk;
        for (int j = 0; j < 6; ++j) {
            Vec y(p.y_dim());
            for (auto& c : y) c = oracle::uniform(rng, 0.0, 1.0);
            yk.add(y);
        }
        Vec x(p.x_dim());
        for (auto& c : x) c = oracle::uniform(rng, -2.0, 2.0);
        Vec vy(p.y_dim());
        for (auto& c : vy) c = oracle::uniform(rng, 0.0, 1.0);
        const auto v = violator_at(vy, 0.0);
        const double eps = oracle::uniform(rng, 0.0, 1.0);
        const double rho = oracle::uniform(rng, 0.0, 2.0);
        auto all = update_discretization(p, yk, x, eps, kInf, v, 2, trial);
        for (const auto& y : yk.points()) CHECK(all.contains(y));
        CHECK(all.contains(vy));
        CHECK(all.size() <= yk.size() + 3);
        auto pruned = update_discretization(p, yk, x, eps, rho, v);
        CHECK(pruned.contains(vy));
        for (const auto& y : yk.points()) {
            double worst = -kInf;
            for (const auto& fam : p.constraints()) worst = std::max(worst, fam.value(x, y));
            if (worst >= -eps - rho) CHECK(pruned.contains(y));
            else if (max_distance(y, vy) > kDedupTol) CHECK_FALSE(pruned.contains(y));
        }
        for (const auto& y : all.points()) CHECK(p.y_domain().contains(y));
    }
}

TEST_CASE("core loop: two-step example on instance A") {
    auto a = instances::instance_a();
    auto res = run_core(a, config(0.1, 0.0, {{0.0}}, fixed_early_schedule()));
    REQUIRE(res.status == CoreStatus::Terminated);
    CHECK(res.k == 1);
    CHECK(res.x[0] == doctest::Approx(-0.1).epsilon(1e-3));
    REQUIRE(res.iterates.size() == 2);
    CHECK(std::abs(res.iterates[0][0]) <= 1e-4);
    REQUIRE(res.final_points.size() == 1);
    CHECK(res.final_points.points()[0][0] == doctest::Approx(1.0).epsilon(1e-3));
    REQUIRE(res.trace.rows().size() == 2);
    CHECK(res.trace.rows()[0].branch == "refine");
    CHECK(res.trace.rows()[1].branch == "terminate");
}

TEST_CASE("core loop: instance B terminates quickly") {
    auto b = instances::instance_b();
    auto res = run_core(b, config(0.5, kInf, {{0.5}}));
    REQUIRE(res.status == CoreStatus::Terminated);
    CHECK(res.k <= 2);
    CHECK(res.x[0] == doctest::Approx(-1.5).epsilon(1e-4));
    CHECK(res.x[1] == doctest::Approx(-1.5).epsilon(1e-4));
}

TEST_CASE("core loop: zero restriction approaches the solution") {
    auto a = instances::instance_a();
    auto cfg = config(0.0, kInf, {{0.0}}, fixed_early_schedule());
    cfg.max_iters = 50;
    auto res = run_core(a, cfg);
    REQUIRE(res.iterates.size() >= 2);
    CHECK(res.trace.rows()[0].branch == "refine");
    CHECK(std::abs(res.x[0]) <= 1e-3);
}

TEST_CASE("core loop: infeasible subproblem is surfaced") {
    auto a = instances::instance_a();
    auto res = run_core(a, config(4.0, kInf, {{1.0}}));
    CHECK(res.status == CoreStatus::InfeasibleSubproblem);
    REQUIRE(res.trace.rows().size() == 1);
    CHECK(res.trace.rows()[0].branch == "infeasible");
    CHECK(std::isinf(res.trace.rows()[0].f_x));
}

TEST_CASE("core loop: budget") {
    auto a = instances::instance_a();
    auto cfg = config(0.0, kInf, {{0.0}});
    cfg.max_iters = 3;
    auto res = run_core(a, cfg);
    CHECK(res.status == CoreStatus::Budget);
    CHECK(res.trace.rows().size() == 3);
}

TEST_CASE("core config validation") {
    auto a = instances::instance_a();
    CHECK_THROWS_AS(run_core(a, config(-1.0, kInf, {{0.0}})), ConfigError);
    CHECK_THROWS_AS(run_core(a, config(0.1, 0.0, {{0.0}}, ToleranceSchedule::geometric(0.1, 0.5))), ConfigError);
    CHECK_THROWS_AS(run_core(a, config(0.1, kInf, {{2.0}})), InputError);
    auto cfg = config(0.1, kInf, {{0.0}});
    cfg.max_iters = 0;
    CHECK_THROWS_AS(run_core(a, cfg), ConfigError);
}

TEST_CASE("core loop: termination, feasibility and monotone objective") {
    std::mt19937_64 rng(12);
    std::vector<SipProblem> probs{instances::instance_a(), instances::instance_b()};
    for (int t = 0; t < 8; ++t) probs.push_back(oracle::random_sip(rng));
    for (const auto& p : probs) {
        const double L = p.max_lipschitz_in_y();
        for (double eps : {0.5, 0.1}) {
            for (double rho : {0.0, 0.5, kInf}) {
                auto cfg = config(eps, rho, {p.y_domain().center()});
                cfg.max_iters = 10'000;
                auto res = run_core(p, cfg);
                REQUIRE(res.status == CoreStatus::Terminated);
                CHECK(certified_violation_bound(p, res.x, 1e-9) <= kFeasTol * (1.0 + L) + 1e-9);
                const auto& f = p.objective().value;
                for (std::size_t k = 1; k < res.iterates.size(); ++k)
                    CHECK(f(res.iterates[k]) >= f(res.iterates[k - 1]) - 10.0 * kGapFloor * std::max(1.0, std::abs(f(res.iterates[k]))));
                for (std::size_t k = 1; k < res.trace.rows().size(); ++k) CHECK(res.trace.rows()[k].k == k);
            }
        }
    }
}

TEST_CASE("core loop: post-hoc feasibility margin of terminal points") {
    auto b = instances::instance_b();
    auto res = run_core(b, config(0.1, kInf, {{0.5}}));
    REQUIRE(res.status == CoreStatus::Terminated);
    const double L = b.constraints()[0].lipschitz_in_y;
    CHECK(feasibility_margin(b, res.x, 1e-4) <= kFeasTol * (1.0 + L));
}

TEST_CASE("core loop: extra sampled violators are reproducible") {
    auto b = instances::instance_b();
    auto cfg = config(0.0, kInf, {{0.5}});
    cfg.extra_violators = 2;
    cfg.max_iters = 5;
    auto r1 = run_core(b, cfg);
    auto r2 = run_core(b, cfg);
    CHECK(r1.final_points.points() == r2.final_points.points());
    CHECK(r1.final_points.size() > 5);
}

TEST_CASE("run trace CSV") {
    auto b = instances::instance_b();
    auto cfg = config(0.1, 0.0, {{0.5}}, ToleranceSchedule::eventually_zero(3));
    std::ostringstream o1, o2;
    run_core(b, cfg).trace.write_csv(o1);
    run_core(b, cfg).trace.write_csv(o2);
    CHECK(o1.str() == o2.str());
    CHECK(o1.str().rfind("k,eps,card_Y,f_x,max_violation,branch,lp_iters,oracle_evals\n", 0) == 0);

    auto row = [](std::size_t k) {
        TraceRow r;
        r.k = k;
        return r;
    };
    RunTrace t;
    t.append(row(2));
    CHECK_THROWS_AS(t.append(row(2)), InputError);
    CHECK_NOTHROW(t.append(row(3)));
}
