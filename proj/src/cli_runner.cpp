#include "hahn/cli_runner.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hahn/calculus.hpp"
#include "hahn/errors.hpp"
#include "hahn/leitmann.hpp"
#include "hahn/models.hpp"
#include "hahn/qcore.hpp"
#include "hahn/variational.hpp"

namespace hahn::cli {

namespace {

using nlohmann::json;

RealFunction poly_function(const std::vector<double>& c) {
    auto eval = [c](double t) {
        double acc = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
        return acc;
    };
    auto deriv = [c](double t) {
        double acc = 0.0;
        for (std::size_t i = c.size(); i-- > 1;) {
            acc = acc * t + static_cast<double>(i) * c[i];
        }
        return acc;
    };
    return make_function(eval, deriv, "poly");
}

RealFunction resolve_function(const JobSpec& spec) {
    if (!spec.poly.empty() && !spec.builtin_name.empty()) {
        throw ValidationError("--poly and --builtin are mutually exclusive");
    }
    if (!spec.poly.empty()) return poly_function(spec.poly);
    if (!spec.builtin_name.empty()) return builtin(spec.builtin_name);
    throw ValidationError("a function is required: pass --poly or --builtin");
}

IntegrationConfig config_of(const JobSpec& spec) {
    IntegrationConfig cfg;
    cfg.rel_tol = spec.tol;
    cfg.abs_tol = spec.tol * 1e-2;
    cfg.max_terms = spec.max_terms;
    return cfg;
}

Utility utility_by_name(const std::string& name) {
    if (name == "quadratic") return quadratic_utility();
    if (name == "log") return log_utility();
    throw ValidationError("unknown utility '" + name + "' (expected quadratic|log)");
}

double require_t(const JobSpec& spec) {
    if (!spec.t) throw ValidationError("--t is required for this command");
    return *spec.t;
}

json inputs_json(const JobSpec& spec) {
    json in;
    in["command"] = spec.command;
    in["q"] = spec.q;
    in["omega"] = spec.omega;
    in["poly"] = spec.poly;
    in["builtin"] = spec.builtin_name;
    if (spec.t) in["t"] = *spec.t;
    in["z"] = spec.z;
    in["a"] = spec.a;
    in["b"] = spec.b;
    in["alpha"] = spec.alpha;
    in["beta"] = spec.beta;
    in["tol"] = spec.tol;
    in["depth"] = spec.depth;
    in["max_terms"] = spec.max_terms;
    in["fixture"] = spec.fixture_name;
    in["check"] = spec.check;
    in["p"] = spec.p;
    in["r"] = spec.r;
    in["horizon"] = spec.horizon;
    in["utility"] = spec.utility;
    in["s"] = spec.s;
    in["format"] = spec.format;
    return in;
}

Fixture load_fixture(const JobSpec& spec, const QOmegaParams& params) {
    if (spec.fixture_name.empty()) {
        throw ValidationError("--name is required for this command");
    }
    return fixture(spec.fixture_name, params);
}

void residual_sweep(const VariationalProblem& problem, const RealFunction& y, int depth,
                    json& results) {
    QLattice lattice = QLattice::build(problem.params, problem.a, problem.b, depth);
    json points = json::array();
    json residuals = json::array();
    double worst = 0.0;
    for (double p : lattice.points()) {
        const double r = el_residual(problem, y, p);
        points.push_back(p);
        residuals.push_back(r);
        worst = std::max(worst, std::abs(r));
    }
    results["points"] = std::move(points);
    results["values"] = std::move(residuals);
    results["max_residual"] = worst;
}

void cmd_deriv(const JobSpec& spec, const QOmegaParams& params, json& results) {
    const RealFunction f = resolve_function(spec);
    results["value"] = hahn_derivative(params, f, require_t(spec));
}

void cmd_integral(const JobSpec& spec, const QOmegaParams& params, json& results,
                  json& diag) {
    const RealFunction f = resolve_function(spec);
    const IntegralResult res = qomega_integral(params, f, spec.a, spec.b, config_of(spec));
    results["value"] = res.value;
    diag["truncation_index"] = res.terms;
    diag["tail_estimate"] = res.tail_estimate;
}

void cmd_exp(const JobSpec& spec, const QOmegaParams& params, json& results, json& diag) {
    const ExpResult res = qomega_exp(params, spec.z, require_t(spec), config_of(spec));
    results["value"] = res.value;
    results["zero_factor"] = res.zero_factor;
    diag["truncation_index"] = res.factors;
}

void cmd_el_check(const JobSpec& spec, const QOmegaParams& params, json& results) {
    const Fixture fx = load_fixture(spec, params);
    if (fx.is_control) {
        throw ValidationError("el-check is undefined for the control fixture");
    }
    const bool custom = !spec.poly.empty() || !spec.builtin_name.empty();
    const RealFunction y = custom ? resolve_function(spec) : fx.solution;
    residual_sweep(fx.problem, y, spec.depth, results);
}

void cmd_solve(const JobSpec& spec, const QOmegaParams& params, json& results) {
    const Fixture fx = load_fixture(spec, params);
    if (fx.is_control) {
        throw ValidationError("solve is undefined for the control fixture");
    }
    const SolveResult sol = solve_direct(fx.problem, spec.depth);
    results["objective"] = sol.objective;
    results["grad_norm"] = sol.grad_norm;
    results["iterations"] = sol.iterations;
    json points = json::array();
    json values = json::array();
    double deviation = 0.0;
    const auto& lattice = sol.trajectory.lattice();
    for (std::size_t i = 0; i < lattice.points().size(); ++i) {
        const double p = lattice.points()[i];
        points.push_back(p);
        values.push_back(sol.trajectory[i]);
        deviation = std::max(deviation, std::abs(sol.trajectory[i] - fx.solution(p)));
    }
    results["points"] = std::move(points);
    results["values"] = std::move(values);
    results["max_deviation_from_solution"] = deviation;
}

void cmd_leitmann_check(const JobSpec& spec, const QOmegaParams& params, json& results) {
    const Fixture fx = load_fixture(spec, params);
    if (fx.is_control) {
        const ControlInvarianceReport rep = verify_control_invariance(
            params, spec.s, fx.control_optimum, config_of(spec), spec.depth);
        results["shift_error"] = rep.shift_error;
        results["covariance_error"] = rep.covariance_error;
        results["null_value"] = rep.null_value;
        results["null_boundary_error"] = rep.null_boundary_error;
        results["optimum_value"] = rep.optimum_value;
        results["passed"] = rep.passed;
        return;
    }
    if (!fx.has_gauge) {
        throw ValidationError("fixture '" + fx.name + "' carries no gauge data");
    }
    const VariationalProblem& problem = fx.problem;
    RealFunction ybar = make_function(
        [&fx](double t) { return fx.transform.inverse(t, fx.solution(t)); },
        "inverse transform of the extremal");
    QLattice lattice = QLattice::build(params, problem.a, problem.b, spec.depth);
    double worst = 0.0;
    for (double pt : lattice.points()) {
        if (params.at_fixed_point(pt)) continue;
        worst = std::max(worst, std::abs(verify_gauge_identity(
                                     params, problem.lagrangian, fx.fbar, fx.transform,
                                     fx.gauge, ybar, pt)));
    }
    results["max_gauge_defect"] = worst;

    const double a = problem.a, b = problem.b;
    std::vector<RealFunction> samples;
    for (int i = 0; i < 5; ++i) {
        const double scale = 0.25 * i;
        samples.push_back(make_function(
            [&fx, a, b, scale](double t) {
                return fx.solution(t) + scale * t * (t - a) * (t - b);
            },
            "extremal + " + std::to_string(scale) + " t(t-a)(t-b)"));
    }
    const ConstantDifferenceReport rep = verify_constant_difference(
        params, problem.lagrangian, fx.fbar, fx.transform, samples, a, b,
        config_of(spec));
    results["differences"] = rep.differences;
    results["spread"] = rep.spread;
    results["passed"] = rep.passed && worst <= 1e-10;
}

void cmd_ramsey(const JobSpec& spec, const QOmegaParams& params, json& results) {
    const RamseyConfig config(spec.p, spec.r, spec.horizon, utility_by_name(spec.utility),
                              params, spec.depth);
    const RealFunction W = resolve_function(spec);
    QLattice lattice = QLattice::build(params, 0.0, spec.horizon, spec.depth);
    json points = json::array();
    json consumption = json::array();
    for (double pt : lattice.points()) {
        points.push_back(pt);
        consumption.push_back(ramsey_consumption(config, W, pt));
    }
    results["points"] = std::move(points);
    results["values"] = std::move(consumption);
    if (spec.t) {
        results["coefficient"] = ramsey_coefficient(config, *spec.t);
        results["consumption"] = ramsey_consumption(config, W, *spec.t);
        results["el_residual"] = ramsey_el_residual(config, W, *spec.t);
    }
}

void cmd_fixtures(const JobSpec& spec, const QOmegaParams& params, json& results) {
    if (spec.fixture_name.empty()) {
        results["names"] = {"example1", "example2", "example4", "example3_control"};
        return;
    }
    const Fixture fx = fixture(spec.fixture_name, params);
    results["name"] = fx.name;
    if (fx.is_control) {
        results["expected_minimum"] = fx.expected_minimum;
        return;
    }
    results["solution_value"] = fx.solution_value;
    if (spec.check == "el") {
        residual_sweep(fx.problem, fx.solution, spec.depth, results);
    } else if (spec.check == "value") {
        // solution_value reported above
    } else if (spec.check == "solve") {
        const SolveResult sol = solve_direct(fx.problem, spec.depth);
        results["objective"] = sol.objective;
        double deviation = 0.0;
        const auto& lattice = sol.trajectory.lattice();
        for (std::size_t i = 0; i < lattice.points().size(); ++i) {
            deviation = std::max(
                deviation, std::abs(sol.trajectory[i] - fx.solution(lattice.points()[i])));
        }
        results["max_deviation_from_solution"] = deviation;
    } else {
        throw ValidationError("unknown check '" + spec.check + "' (expected el|value|solve)");
    }
}

std::string to_csv(const json& results) {
    std::ostringstream out;
    if (results.contains("points") && results.contains("values")) {
        const auto& pts = results["points"];
        const auto& vals = results["values"];
        for (std::size_t i = 0; i < pts.size(); ++i) {
            out << json(pts[i]).dump() << "," << json(vals[i]).dump() << "\n";
        }
        return out.str();
    }
    for (const auto& [key, value] : results.items()) {
        out << key << "," << value.dump() << "\n";
    }
    return out.str();
}

}  // namespace

RunResult run(const JobSpec& spec) {
    json report;
    report["version"] = kVersion;
    report["inputs"] = inputs_json(spec);
    json results = json::object();
    json diag;
    diag["truncation_index"] = 0;
    diag["tail_estimate"] = 0.0;
    diag["warnings"] = json::array();

    int exit_code = 0;
    try {
        if (spec.format != "json" && spec.format != "csv") {
            throw ValidationError("unknown output format '" + spec.format + "'");
        }
        if (!(spec.tol > 0.0)) throw ValidationError("--tol must be positive");
        if (spec.depth < 1) throw ValidationError("--depth must be >= 1");
        const QOmegaParams params(spec.q, spec.omega);  // validates q, omega

        if (spec.command == "deriv") {
            cmd_deriv(spec, params, results);
        } else if (spec.command == "integral") {
            cmd_integral(spec, params, results, diag);
        } else if (spec.command == "exp") {
            cmd_exp(spec, params, results, diag);
        } else if (spec.command == "el-check") {
            cmd_el_check(spec, params, results);
        } else if (spec.command == "solve") {
            cmd_solve(spec, params, results);
        } else if (spec.command == "leitmann-check") {
            cmd_leitmann_check(spec, params, results);
        } else if (spec.command == "ramsey") {
            cmd_ramsey(spec, params, results);
        } else if (spec.command == "fixtures") {
            cmd_fixtures(spec, params, results);
        } else {
            throw ValidationError("unknown command '" + spec.command + "'");
        }
    } catch (const ValidationError& e) {
        exit_code = 2;
        report["error"] = {{"type", "validation"}, {"message", e.what()}};
    } catch (const UnknownFixture& e) {
        exit_code = 2;
        report["error"] = {{"type", "validation"}, {"message", e.what()}};
    } catch (const Error& e) {
        exit_code = 3;
        report["error"] = {{"type", "numerical"}, {"message", e.what()}};
    } catch (const std::exception& e) {
        exit_code = 3;
        report["error"] = {{"type", "internal"}, {"message", e.what()}};
    }

    report["results"] = std::move(results);
    report["diagnostics"] = std::move(diag);

    RunResult out;
    out.exit_code = exit_code;
    if (spec.format == "csv" && exit_code == 0) {
        out.report = to_csv(report["results"]);
    } else {
        out.report = report.dump(2) + "\n";
    }
    return out;
}

}  // namespace hahn::cli
