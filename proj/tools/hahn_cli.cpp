#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hahn/cli_runner.hpp"

namespace {

std::vector<double> parse_poly(const std::string& csv) {
    std::vector<double> coeffs;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        const std::string piece =
            csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        std::size_t used = 0;
        coeffs.push_back(std::stod(piece, &used));
        if (used != piece.size()) throw std::invalid_argument("trailing junk in '" + piece + "'");
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return coeffs;
}

void add_common(CLI::App* cmd, hahn::cli::JobSpec& spec) {
    cmd->add_option("--q", spec.q, "ratio q in (0,1)");
    cmd->add_option("--omega", spec.omega, "shift omega > 0");
    cmd->add_option("--tol", spec.tol, "series tolerance");
    cmd->add_option("--max-terms", spec.max_terms, "series term cap");
    cmd->add_option("--format", spec.format, "output format: json|csv");
}

void add_function(CLI::App* cmd, std::string& poly_csv, hahn::cli::JobSpec& spec) {
    cmd->add_option("--poly", poly_csv, "polynomial coefficients c0,c1,... of sum c_i t^i");
    cmd->add_option("--builtin", spec.builtin_name, "named builtin function");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hahn quantum calculus toolkit"};
    app.require_subcommand(1);

    hahn::cli::JobSpec spec;
    std::string poly_csv;
    double t_value = 0.0;

    auto* deriv = app.add_subcommand("deriv", "q,omega-derivative of a function at t");
    add_common(deriv, spec);
    add_function(deriv, poly_csv, spec);
    deriv->add_option("--t", t_value, "evaluation point")->required();

    auto* integral = app.add_subcommand("integral", "Jackson-Norlund integral over [a,b]");
    add_common(integral, spec);
    add_function(integral, poly_csv, spec);
    integral->add_option("--a", spec.a, "lower endpoint");
    integral->add_option("--b", spec.b, "upper endpoint");

    auto* expc = app.add_subcommand("exp", "q,omega-exponential E(z,t)");
    add_common(expc, spec);
    expc->add_option("--z", spec.z, "argument z")->required();
    expc->add_option("--t", t_value, "evaluation point")->required();

    auto* elcheck = app.add_subcommand("el-check",
                                       "Euler-Lagrange residual sweep for a fixture");
    add_common(elcheck, spec);
    add_function(elcheck, poly_csv, spec);
    elcheck->add_option("--name", spec.fixture_name, "fixture name")->required();
    elcheck->add_option("--depth", spec.depth, "lattice depth")->default_val(8);

    auto* solve = app.add_subcommand("solve", "direct minimization for a fixture");
    add_common(solve, spec);
    solve->add_option("--name", spec.fixture_name, "fixture name")->required();
    solve->add_option("--depth", spec.depth, "lattice depth")->default_val(20);

    auto* leit = app.add_subcommand("leitmann-check",
                                    "gauge identity / invariance verification");
    add_common(leit, spec);
    leit->add_option("--name", spec.fixture_name, "fixture name")->required();
    leit->add_option("--depth", spec.depth, "lattice depth")->default_val(12);
    leit->add_option("--s", spec.s, "family parameter (control fixture)");

    auto* ramsey = app.add_subcommand("ramsey", "quantum Ramsey model evaluation");
    add_common(ramsey, spec);
    add_function(ramsey, poly_csv, spec);
    ramsey->add_option("--p", spec.p, "discount rate");
    ramsey->add_option("--r", spec.r, "rate of yield");
    ramsey->add_option("--horizon", spec.horizon, "horizon T");
    ramsey->add_option("--utility", spec.utility, "utility: quadratic|log");
    ramsey->add_option("--depth", spec.depth, "lattice depth")->default_val(12);
    ramsey->add_option("--t", t_value, "evaluation point for scalar outputs");

    auto* fixtures = app.add_subcommand("fixtures", "list or check the built-in fixtures");
    add_common(fixtures, spec);
    fixtures->add_option("--name", spec.fixture_name, "fixture name");
    fixtures->add_option("--check", spec.check, "check to run: el|value|solve");
    fixtures->add_option("--depth", spec.depth, "lattice depth")->default_val(8);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    CLI::App* chosen = app.get_subcommands().front();
    spec.command = chosen->get_name();
    try {
        if (!poly_csv.empty()) spec.poly = parse_poly(poly_csv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "invalid --poly: %s\n", e.what());
        return 2;
    }
    if (chosen->count("--t") > 0) spec.t = t_value;

    const hahn::cli::RunResult result = hahn::cli::run(spec);
    std::fputs(result.report.c_str(), stdout);
    return result.exit_code;
}
