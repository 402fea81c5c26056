#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "csip/io.hpp"

namespace {

double parse_extended(const std::string& s, const char* name) {
    if (s == "inf" || s == "infinity" || s == "Inf") return csip::kInf;
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw csip::ConfigError(std::string("--") + name + ": not a number: '" + s + "'");
}

int check(const std::string& source) {
    const csip::SipProblem p = csip::io::load_problem(source);
    std::cout << "x dimension: " << p.x_dim() << "\n"
              << "y dimension: " << p.y_dim() << "\n"
              << "constraint families: " << p.constraints().size() << "\n"
              << "max Lipschitz constant in y: " << p.max_lipschitz_in_y() << "\n";
    if (const auto& L = p.objective().lipschitz_constant) std::cout << "Lipschitz constant of f: " << *L << "\n";
    if (!p.slater_point()) {
        std::cout << "slater point: none\n";
        return 0;
    }
    const double bound = csip::certified_violation_bound(p, *p.slater_point(), csip::kPostHocTol);
    std::cout << "slater point certified, max violation bound " << bound << "\n"
              << "eps*: " << csip::derive_eps_star(p, csip::kPostHocTol) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive discretization solver for convex semi-infinite programs"};
    app.require_subcommand(1);

    std::string problem;
    std::string algorithm = "sequential";
    std::string rho = "inf";
    csip::io::RunConfig cfg;
    std::string trace_out, outcome_out;

    auto* solve = app.add_subcommand("solve", "Solve a problem and report the outcome as JSON");
    solve->add_option("--problem", problem, "builtin:<name> or problem JSON file")->required();
    solve->add_option("--algorithm", algorithm, "core, sequential or simultaneous")->capture_default_str();
    solve->add_option("--delta", cfg.delta, "target precision")->capture_default_str();
    solve->add_option("--rho", rho, "pruning radius (number or inf)")->capture_default_str();
    solve->add_option("--r", cfg.r, "restriction shrink factor")->capture_default_str();
    solve->add_option("--eps0", cfg.eps0, "initial restriction parameter")->capture_default_str();
    solve->add_option("--schedule", cfg.schedule, "geometric(q) or eventually_zero(k0)")->capture_default_str();
    solve->add_option("--max-iters", cfg.max_iters, "solver-call budget (iterations for core)")->capture_default_str();
    solve->add_option("--trace-out", trace_out, "trace CSV path");
    solve->add_option("--outcome-out", outcome_out, "outcome JSON path");

    std::string check_problem;
    auto* chk = app.add_subcommand("check", "Validate a problem and its Slater certificate");
    chk->add_option("--problem", check_problem, "builtin:<name> or problem JSON file")->required();

    std::string bench_problem = "builtin:instance_A";
    std::size_t bench_iters = 30;
    double bench_tol = 1e-6;
    std::string bench_out;
    auto* bench = app.add_subcommand("bench", "Discretization sizes: adaptive rho = 0 / inf versus uniform grids");
    bench->add_option("--problem", bench_problem, "builtin:<name> or problem JSON file")->capture_default_str();
    bench->add_option("--iters", bench_iters, "core-loop iterations at zero restriction")->capture_default_str();
    bench->add_option("--tol", bench_tol, "feasibility tolerance for the grid baseline")->capture_default_str();
    bench->add_option("--out", bench_out, "CSV path (stdout when absent)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*solve) {
            cfg.algorithm = csip::io::parse_algorithm(algorithm);
            cfg.rho = parse_extended(rho, "rho");
            if (!trace_out.empty()) cfg.trace_out = trace_out;
            if (!outcome_out.empty()) cfg.outcome_out = outcome_out;
            const csip::SipProblem p = csip::io::load_problem(problem);
            const auto report = csip::io::run(cfg, p);
            std::cout << report.outcome_json.dump(2) << '\n';
            return report.exit_code;
        }
        if (*chk) return check(check_problem);
        if (*bench) {
            const csip::SipProblem p = csip::io::load_problem(bench_problem);
            if (bench_out.empty()) {
                csip::io::write_bench(p, bench_iters, bench_tol, std::cout);
            } else {
                std::ofstream out(bench_out);
                if (!out) throw csip::InputError("cannot write '" + bench_out + "'");
                csip::io::write_bench(p, bench_iters, bench_tol, out);
            }
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
