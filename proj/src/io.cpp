#include "csip/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "csip/instances.hpp"

namespace csip::io {

namespace {

const Json& need(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw InputError("problem file: missing field '" + path + key + "'");
    return j.at(key);
}

template <class T>
T as(const Json& j, const std::string& path) {
    try {
        return j.get<T>();
    } catch (const Json::exception&) {
        throw InputError("problem file: field '" + path + "' has the wrong type");
    }
}

template <class T>
T field(const Json& j, const std::string& key, const std::string& path) {
    return as<T>(need(j, key, path), path + key);
}

BoxDomain box_from_json(const Json& j, const std::string& path) {
    need(j, "lower", path + ".");
    try {
        return BoxDomain(field<Vec>(j, "lower", path + "."), field<Vec>(j, "upper", path + "."));
    } catch (const InputError& e) {
        if (std::string(e.what()).starts_with("problem file")) throw;
        throw InputError("problem file: field '" + path + "': " + e.what());
    }
}

Json box_to_json(const BoxDomain& b) { return Json{{"lower", b.lower()}, {"upper", b.upper()}}; }

Polynomial polynomial_from_json(const Json& j, std::size_t num_vars, const std::string& path) {
    if (!j.is_array()) throw InputError("problem file: field '" + path + "' must be an array of terms");
    std::vector<Monomial> terms;
    for (std::size_t t = 0; t < j.size(); ++t) {
        const std::string tp = path + "[" + std::to_string(t) + "].";
        Monomial m{field<MultiIndex>(j[t], "exponents", tp), field<double>(j[t], "coef", tp)};
        if (m.exponents.size() != num_vars)
            throw InputError("problem file: field '" + tp + "exponents' must have " + std::to_string(num_vars) +
                             " entries");
        terms.push_back(std::move(m));
    }
    try {
        return Polynomial(num_vars, std::move(terms));
    } catch (const InputError& e) {
        throw InputError("problem file: field '" + path + "': " + e.what());
    }
}

Json polynomial_to_json(const Polynomial& p) {
    Json arr = Json::array();
    for (const auto& m : p.terms()) arr.push_back(Json{{"exponents", m.exponents}, {"coef", m.coef}});
    return arr;
}

SipProblem sip_from_json(const Json& doc) {
    const BoxDomain X = box_from_json(need(doc, "x_domain", ""), "x_domain");
    const BoxDomain Y = box_from_json(need(doc, "y_domain", ""), "y_domain");
    const Json& obj = need(doc, "objective", "");
    QuadraticForm q{field<std::vector<Vec>>(obj, "Q", "objective."), field<Vec>(obj, "c", "objective."),
                    obj.contains("d") ? field<double>(obj, "d", "objective.") : 0.0};
    ConvexObjective objective = make_quadratic_objective(std::move(q), X);

    std::vector<ConstraintFamily> fams;
    const Json& cons = need(doc, "constraints", "");
    if (!cons.is_array()) throw InputError("problem file: field 'constraints' must be an array");
    for (std::size_t i = 0; i < cons.size(); ++i) {
        const std::string cp = "constraints[" + std::to_string(i) + "].";
        const Json& cj = cons[i];
        const int index = cj.contains("index") ? field<int>(cj, "index", cp) : static_cast<int>(i);
        const Json& aj = need(cj, "a", cp);
        if (!aj.is_array() || aj.size() != X.dim())
            throw InputError("problem file: field '" + cp + "a' must list one polynomial per x coordinate");
        AffinePolynomialForm form;
        for (std::size_t k = 0; k < aj.size(); ++k)
            form.a.push_back(polynomial_from_json(aj[k], Y.dim(), cp + "a[" + std::to_string(k) + "]"));
        form.b = polynomial_from_json(need(cj, "b", cp), Y.dim(), cp + "b");
        fams.push_back(make_affine_polynomial_family(index, std::move(form), X, Y));
    }
    std::optional<Vec> slater;
    if (doc.contains("slater_point") && !doc.at("slater_point").is_null())
        slater = field<Vec>(doc, "slater_point", "");
    return SipProblem(X, Y, std::move(objective), std::move(fams), slater);
}

}  // namespace

std::vector<Observation> read_observations_csv(const std::string& path, std::size_t input_dim) {
    std::ifstream in(path);
    if (!in) throw InputError("data file: cannot open '" + path + "'");
    std::vector<Observation> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        std::vector<double> vals;
        bool numeric = true;
        for (const auto& c : cells) {
            try {
                std::size_t used = 0;
                vals.push_back(std::stod(c, &used));
                if (c.find_first_not_of(" \t", used) != std::string::npos) numeric = false;
            } catch (const std::exception&) {
                numeric = false;
            }
        }
        if (!numeric) {
            if (out.empty() && lineno == 1) continue;
            throw InputError("data file: non-numeric value on line " + std::to_string(lineno));
        }
        if (vals.size() != input_dim + 1)
            throw InputError("data file: line " + std::to_string(lineno) + " has " + std::to_string(vals.size()) +
                             " columns, expected " + std::to_string(input_dim + 1));
        out.push_back({Vec(vals.begin(), vals.end() - 1), vals.back()});
    }
    return out;
}

RegressionSpec regression_from_json(const Json& doc, const std::string& base_dir) {
    RegressionSpec spec;
    spec.degree = field<int>(doc, "degree", "");
    spec.u_domain = box_from_json(need(doc, "u_domain", ""), "u_domain");
    spec.coeff_box = box_from_json(need(doc, "coeff_box", ""), "coeff_box");
    if (doc.contains("ridge")) spec.ridge = field<double>(doc, "ridge", "");
    if (doc.contains("data")) {
        const Json& data = doc.at("data");
        if (!data.is_array()) throw InputError("problem file: field 'data' must be an array");
        for (std::size_t l = 0; l < data.size(); ++l) {
            const std::string dp = "data[" + std::to_string(l) + "].";
            spec.data.push_back({field<Vec>(data[l], "u", dp), field<double>(data[l], "t", dp)});
        }
    } else if (doc.contains("data_csv")) {
        std::filesystem::path csv = field<std::string>(doc, "data_csv", "");
        if (csv.is_relative()) csv = std::filesystem::path(base_dir) / csv;
        spec.data = read_observations_csv(csv.string(), spec.u_domain.dim());
    } else {
        throw InputError("problem file: missing field 'data' (or 'data_csv')");
    }
    if (doc.contains("constraints")) {
        const Json& cons = doc.at("constraints");
        if (!cons.is_array()) throw InputError("problem file: field 'constraints' must be an array");
        for (std::size_t i = 0; i < cons.size(); ++i) {
            const std::string cp = "constraints[" + std::to_string(i) + "].";
            ShapeConstraint c;
            const Json& w = need(cons[i], "weights", cp);
            if (!w.is_array()) throw InputError("problem file: field '" + cp + "weights' must be an array");
            for (std::size_t t = 0; t < w.size(); ++t) {
                const std::string wp = cp + "weights[" + std::to_string(t) + "].";
                c.weights[field<MultiIndex>(w[t], "alpha", wp)] += field<double>(w[t], "weight", wp);
            }
            if (cons[i].contains("offset")) c.offset = field<double>(cons[i], "offset", cp);
            spec.constraints.push_back(std::move(c));
        }
    }
    if (doc.contains("slater_point") && !doc.at("slater_point").is_null())
        spec.slater_point = field<Vec>(doc, "slater_point", "");
    return spec;
}

SipProblem problem_from_json(const Json& doc, const std::string& base_dir) {
    if (!doc.is_object()) throw InputError("problem file: top level must be an object");
    const std::string type = doc.contains("type") ? field<std::string>(doc, "type", "") : "sip";
    if (type == "sip") return sip_from_json(doc);
    if (type == "regression") return build_problem(regression_from_json(doc, base_dir));
    throw InputError("problem file: field 'type' must be \"sip\" or \"regression\"");
}

SipProblem load_problem(const std::string& source) {
    static const std::string prefix = "builtin:";
    if (source.starts_with(prefix)) {
        const std::string name = source.substr(prefix.size());
        if (name == "instance_A") return instances::instance_a();
        if (name == "instance_B") return instances::instance_b();
        if (name == "instance_R") return build_problem(regression_instance_r());
        if (name == "quasi_convex") return instances::quasi_convex_fixture();
        throw InputError("unknown builtin problem '" + name + "'");
    }
    std::ifstream in(source);
    if (!in) throw InputError("problem file: cannot open '" + source + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(std::string("problem file: malformed JSON: ") + e.what());
    }
    return problem_from_json(doc, std::filesystem::path(source).parent_path().string());
}

Json serialize(const SipProblem& problem) {
    const auto& quad = problem.objective().quadratic;
    if (!quad) throw InputError("serialize: objective has no quadratic form");
    Json cons = Json::array();
    for (const auto& fam : problem.constraints()) {
        if (!fam.affine_polynomial) throw InputError("serialize: constraint family without polynomial form");
        Json a = Json::array();
        for (const auto& ak : fam.affine_polynomial->a) a.push_back(polynomial_to_json(ak));
        cons.push_back(Json{{"index", fam.index}, {"a", a}, {"b", polynomial_to_json(fam.affine_polynomial->b)}});
    }
    Json doc{{"type", "sip"},
             {"x_domain", box_to_json(problem.x_domain())},
             {"y_domain", box_to_json(problem.y_domain())},
             {"objective", Json{{"Q", quad->Q}, {"c", quad->c}, {"d", quad->d}}},
             {"constraints", cons}};
    if (problem.slater_point()) doc["slater_point"] = *problem.slater_point();
    return doc;
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "core") return Algorithm::Core;
    if (name == "sequential") return Algorithm::Sequential;
    if (name == "simultaneous") return Algorithm::Simultaneous;
    throw ConfigError("unknown algorithm '" + name + "' (expected core, sequential or simultaneous)");
}

ToleranceSchedule schedule_for(const RunConfig& cfg) {
    if (!(cfg.delta > 0.0)) throw ConfigError("delta must be > 0");
    return ToleranceSchedule::parse(cfg.schedule, cfg.delta / 4.0);
}

Json outcome_to_json(const std::string& status, const SolveOutcome& o) {
    return Json{{"status", status},
                {"x", o.x_star},
                {"f", o.f_value},
                {"feasibility_margin", o.feasibility_margin},
                {"certified_violation", o.certified_violation},
                {"eps_final", o.eps_final},
                {"outer_iterations", o.outer_iterations},
                {"inner_iterations", o.inner_iterations},
                {"oracle_evals", o.oracle_evals}};
}

RunReport run(const RunConfig& cfg, const SipProblem& problem) {
    RunReport rep;
    const ToleranceSchedule schedule = schedule_for(cfg);
    const Discretization y0(std::vector<Vec>{problem.y_domain().center()});

    switch (cfg.algorithm) {
        case Algorithm::Core: {
            CoreConfig c;
            c.eps = cfg.eps0;
            c.rho = cfg.rho;
            c.schedule = schedule;
            c.y0 = y0;
            c.max_iters = cfg.max_iters;
            CoreResult res = run_core(problem, c);
            rep.status = to_string(res.status);
            rep.exit_code = res.status == CoreStatus::Terminated ? 0 : 2;
            rep.outcome.status =
                res.status == CoreStatus::Terminated ? OutcomeStatus::DeltaApproximate : OutcomeStatus::BudgetExceeded;
            rep.outcome.x_star = res.x;
            rep.outcome.outer_iterations = 1;
            rep.outcome.inner_iterations = res.trace.rows().size();
            rep.outcome.inner_per_level = {rep.outcome.inner_iterations};
            rep.outcome.oracle_evals = res.oracle_evals;
            rep.outcome.eps_final = cfg.eps0;
            rep.outcome.trace = std::move(res.trace);
            evaluate_outcome(problem, rep.outcome);
            break;
        }
        case Algorithm::Sequential: {
            SequentialConfig c;
            c.delta = cfg.delta;
            c.r = cfg.r;
            c.eps00 = cfg.eps0;
            c.schedule = schedule;
            c.rho = cfg.rho;
            c.y0 = y0;
            c.max_solver_calls = cfg.max_iters;
            rep.outcome = run_sequential(problem, c);
            break;
        }
        case Algorithm::Simultaneous: {
            SimultaneousConfig c(cfg.delta, schedule, cfg.eps0, cfg.r, cfg.rho);
            c.y0_check = y0;
            c.y0_hat = y0;
            c.max_solver_calls = cfg.max_iters;
            rep.outcome = run_simultaneous(problem, c);
            break;
        }
    }
    if (cfg.algorithm != Algorithm::Core) {
        rep.status = to_string(rep.outcome.status);
        rep.exit_code = rep.outcome.status == OutcomeStatus::DeltaApproximate ? 0 : 2;
    }
    rep.outcome_json = outcome_to_json(rep.status, rep.outcome);

    if (cfg.trace_out) {
        std::ofstream t(*cfg.trace_out);
        if (!t) throw InputError("cannot write trace file '" + *cfg.trace_out + "'");
        rep.outcome.trace.write_csv(t);
    }
    if (cfg.outcome_out) {
        std::ofstream o(*cfg.outcome_out);
        if (!o) throw InputError("cannot write outcome file '" + *cfg.outcome_out + "'");
        o << rep.outcome_json.dump(2) << '\n';
    }
    return rep;
}

void write_bench(const SipProblem& problem, std::size_t iterations, double tol, std::ostream& out) {
    const Discretization y0(std::vector<Vec>{problem.y_domain().center()});
    const double res = outcome_grid_resolution(problem.y_domain());
    std::vector<CoreResult> runs;
    for (double rho : {0.0, kInf}) {
        CoreConfig c;
        c.eps = 0.0;
        c.rho = rho;
        c.y0 = y0;
        c.max_iters = iterations;
        runs.push_back(run_core(problem, c));
    }

    const auto old_precision = out.precision(17);
    out << "k,card_Y_rho0,card_Y_rhoinf\n";
    const std::size_t rows = std::max(runs[0].trace.rows().size(), runs[1].trace.rows().size());
    for (std::size_t k = 0; k < rows; ++k) {
        out << k;
        for (const auto& r : runs) {
            out << ',';
            if (k < r.trace.rows().size()) out << r.trace.rows()[k].card_y;
        }
        out << '\n';
    }

    out << "\nmethod,max_card_Y,final_card_Y,f,feasibility_margin\n";
    const char* names[] = {"adaptive_rho0", "adaptive_rhoinf"};
    for (std::size_t i = 0; i < runs.size(); ++i) {
        std::size_t mx = 0;
        for (const auto& row : runs[i].trace.rows()) mx = std::max(mx, row.card_y);
        const auto& x = runs[i].x;
        out << names[i] << ',' << mx << ',' << runs[i].final_points.size() << ','
            << (x.empty() ? kInf : problem.objective().value(x)) << ','
            << (x.empty() ? kInf : feasibility_margin(problem, x, res)) << '\n';
    }

    // Coarsest uniform grid (2^j + 1 points per axis) meeting the tolerance.
    for (std::size_t per_axis = 2; per_axis <= 1025; per_axis = 2 * per_axis - 1) {
        const Discretization grid = Discretization::uniform_grid(problem.y_domain(), per_axis);
        if (grid.size() > 100'000) break;
        const auto sol = solve_discretized(DiscretizedProblem{&problem, 0.0, grid}, 0.0);
        if (sol.status != SolveStatus::Feasible) break;
        const double margin = feasibility_margin(problem, sol.x, res);
        if (margin <= tol || per_axis == 1025) {
            out << "uniform_grid," << grid.size() << ',' << grid.size() << ',' << sol.upper << ',' << margin << '\n';
            break;
        }
    }
    out.precision(old_precision);
}

}  // namespace csip::io
