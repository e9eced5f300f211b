#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <utility>

#include "hahn/calculus.hpp"
#include "hahn/leitmann.hpp"
#include "hahn/qcore.hpp"
#include "hahn/variational.hpp"

namespace hahn {

/// Instantaneous utility with its marginal supplied analytically.
struct Utility {
    std::function<double(double)> value;
    std::function<double(double)> marginal;  // U'
};

Utility log_utility();        // domain c > 0; DomainError otherwise
Utility quadratic_utility();  // U(c) = c^2/2, U'(c) = c

/// Quantum Ramsey model: maximize the discounted utility of consumption
/// int_0^T E(-p,t) U[C(t)] over production paths W, with C tied to W by
/// the quantum budget constraint. Construction verifies that the rate
/// coefficients are nonsingular on the working lattice of [0,T].
struct RamseyConfig {
    double p;  // discount rate
    double r;  // rate of yield
    double T;  // horizon
    Utility utility;
    QOmegaParams params;

    RamseyConfig(double p, double r, double T, Utility utility, QOmegaParams params,
                 int check_depth = 40);
};

/// The rate coefficient multiplying W(qt+w) in the budget constraint:
/// [r(1 + r(t - (t-w)/q)) - r(1 - 1/q)] / [(1 + r(t - (t-w)/q))(1 - r(t(1-q)-w))].
/// SingularCoefficient if a denominator factor vanishes within 1e-13.
double ramsey_coefficient(const RamseyConfig& config, double t);

/// Consumption C(t) = W(qt+w) * coefficient(t) - D_{q,w} W(t).
double ramsey_consumption(const RamseyConfig& config, const RealFunction& W, double t);
double ramsey_consumption(const RamseyConfig& config, const LatticeTrajectory& W, double t);

/// Euler-Lagrange residual of the model along W:
/// E(-p,t) U'[C(t)] coefficient(t) + D_{q,w}[ s -> E(-p,s) U'[C(s)] ](t).
/// Zero characterizes a quantum Ramsey extremal. ExponentialZero if the
/// discount factor degenerates to an exact zero product.
double ramsey_el_residual(const RamseyConfig& config, const RealFunction& W, double t);

/// The model as a generic integrand f(t, u, v) = -E(-p,t) U[u coeff(t) - v]
/// (negated: the library minimizes), for cross-checks against el_residual.
Lagrangian ramsey_lagrangian(const RamseyConfig& config);

/// Named function builtins usable where polynomials do not reach:
///   "ex22"       the discontinuous yet q,w-differentiable piecewise example
///   "leitmann_g" g(t) = 1 + t^2/2 (with classical derivative t)
RealFunction builtin(std::string_view name);  // UnknownFixture on bad name

/// A worked variational fixture: the problem, its analytic solution, the
/// solution's functional value, and (where the fixture is solved by the
/// transformation method) the gauge machinery certifying it.
struct Fixture {
    Fixture(std::string name, VariationalProblem problem)
        : name(std::move(name)), problem(std::move(problem)) {}

    std::string name;
    VariationalProblem problem;
    RealFunction solution;
    double solution_value = 0.0;

    bool has_gauge = false;
    Lagrangian fbar;  // transformed (trivial) integrand
    Transformation transform;
    GaugeTerm gauge;

    bool is_control = false;
    ControlTrajectories control_optimum;  // only for example3_control
    double expected_minimum = 0.0;
};

/// name in {example1, example2, example4, example3_control}; UnknownFixture
/// otherwise. The overload with bounds re-parameterizes the interval and
/// boundary values where the fixture admits it.
Fixture fixture(std::string_view name, const QOmegaParams& params);
Fixture fixture(std::string_view name, const QOmegaParams& params, double a, double b,
                double alpha, double beta);

}  // namespace hahn
