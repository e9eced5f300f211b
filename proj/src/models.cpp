#include "hahn/models.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "hahn/errors.hpp"

namespace hahn {

Utility log_utility() {
    auto guard = [](double c) {
        if (!(c > 0.0)) {
            throw DomainError("log utility requires positive consumption, got " +
                              std::to_string(c));
        }
    };
    Utility u;
    u.value = [guard](double c) {
        guard(c);
        return std::log(c);
    };
    u.marginal = [guard](double c) {
        guard(c);
        return 1.0 / c;
    };
    return u;
}

Utility quadratic_utility() {
    Utility u;
    u.value = [](double c) { return 0.5 * c * c; };
    u.marginal = [](double c) { return c; };
    return u;
}

namespace {

constexpr double kSingularTol = 1e-13;

std::pair<double, double> rate_factors(const RamseyConfig& config, double t) {
    const double q = config.params.q();
    const double w = config.params.omega();
    const double a = 1.0 + config.r * (t - (t - w) / q);
    const double b = 1.0 - config.r * (t * (1.0 - q) - w);
    return {a, b};
}

}  // namespace

RamseyConfig::RamseyConfig(double p, double r, double T, Utility utility,
                           QOmegaParams params, int check_depth)
    : p(p), r(r), T(T), utility(std::move(utility)), params(params) {
    if (!(p >= 0.0)) throw ValidationError("discount rate p must be nonnegative");
    if (!(T > 0.0)) throw ValidationError("horizon T must be positive");
    QLattice lattice = QLattice::build(params, 0.0, T, check_depth);
    for (double t : lattice.points()) {
        const auto [a, b] = rate_factors(*this, t);
        if (std::abs(a) <= kSingularTol || std::abs(b) <= kSingularTol) {
            throw SingularCoefficient("rate coefficient singular at lattice point t=" +
                                      std::to_string(t));
        }
    }
}

double ramsey_coefficient(const RamseyConfig& config, double t) {
    const auto [a, b] = rate_factors(config, t);
    if (std::abs(a) <= kSingularTol || std::abs(b) <= kSingularTol) {
        throw SingularCoefficient("rate coefficient singular at t=" + std::to_string(t));
    }
    const double q = config.params.q();
    return (config.r * a - config.r * (1.0 - 1.0 / q)) / (a * b);
}

double ramsey_consumption(const RamseyConfig& config, const RealFunction& W, double t) {
    return W(config.params.jump(t)) * ramsey_coefficient(config, t) -
           hahn_derivative(config.params, W, t);
}

double ramsey_consumption(const RamseyConfig& config, const LatticeTrajectory& W,
                          double t) {
    return W.value_at(config.params.jump(t)) * ramsey_coefficient(config, t) -
           lattice_derivative(W, t);
}

namespace {

double discount_factor(const RamseyConfig& config, double t) {
    const ExpResult e = qomega_exp(config.params, -config.p, t);
    if (e.zero_factor) {
        throw ExponentialZero("discount factor E(-p,t) has an exact zero factor at t=" +
                              std::to_string(t));
    }
    return e.value;
}

}  // namespace

double ramsey_el_residual(const RamseyConfig& config, const RealFunction& W, double t) {
    const auto marginal_along = [&config, &W](double s) {
        return discount_factor(config, s) *
               config.utility.marginal(ramsey_consumption(config, W, s));
    };
    RealFunction path = make_function(marginal_along, "E(-p,t) U'[C(t)]");
    return marginal_along(t) * ramsey_coefficient(config, t) +
           hahn_derivative(config.params, path, t);
}

Lagrangian ramsey_lagrangian(const RamseyConfig& config) {
    // negated: the variational layer minimizes, the model maximizes
    Lagrangian L;
    L.f = [config](double t, double u, double v) {
        return -discount_factor(config, t) *
               config.utility.value(u * ramsey_coefficient(config, t) - v);
    };
    L.d2 = [config](double t, double u, double v) {
        const double coeff = ramsey_coefficient(config, t);
        return -discount_factor(config, t) *
               config.utility.marginal(u * coeff - v) * coeff;
    };
    L.d3 = [config](double t, double u, double v) {
        return discount_factor(config, t) *
               config.utility.marginal(u * ramsey_coefficient(config, t) - v);
    };
    return L;
}

RealFunction builtin(std::string_view name) {
    if (name == "ex22") {
        // discontinuous but q,w-differentiable on [-1,1] for q = w = 1/2;
        // the classical derivative -1 is valid near the fixed point t = 1
        return make_function(
            [](double t) {
                if (t == -1.0) return 0.0;
                if (t == 0.0) return 1.0;
                return -t;
            },
            [](double) { return -1.0; }, "ex22");
    }
    if (name == "leitmann_g") {
        return make_function([](double t) { return 1.0 + 0.5 * t * t; },
                             [](double t) { return t; }, "leitmann_g");
    }
    throw UnknownFixture("unknown builtin '" + std::string(name) + "'");
}

namespace {

Fixture make_example1(const QOmegaParams& params, double a, double b, double alpha,
                      double beta) {
    Lagrangian L;
    L.f = [](double, double u, double v) { return u + 0.5 * v * v; };
    L.d2 = [](double, double, double) { return 1.0; };
    L.d3 = [](double, double, double v) { return v; };
    Fixture fx{"example1", VariationalProblem{L, a, b, alpha, beta, params}};

    // general solution of D D y = 1: y = t^2/(1+q) + c1 t + c2
    const double q = params.q();
    const double c1 = ((beta - alpha) - (b * b - a * a) / (1.0 + q)) / (b - a);
    const double c2 = alpha - a * a / (1.0 + q) - c1 * a;
    fx.solution = make_function(
        [q, c1, c2](double t) { return t * t / (1.0 + q) + c1 * t + c2; },
        [q, c1](double t) { return 2.0 * t / (1.0 + q) + c1; }, "example1 extremal");
    fx.solution_value = evaluate_functional(fx.problem, fx.solution);
    return fx;
}

Fixture make_example2(const QOmegaParams& params, double a, double b, double alpha,
                      double beta) {
    if (alpha == beta) throw ValidationError("example2 requires alpha != beta");
    Lagrangian L;
    L.f = [](double t, double u, double v) { return v * v + u + t * v; };
    L.d2 = [](double, double, double) { return 1.0; };
    L.d3 = [](double t, double, double v) { return 2.0 * v + t; };
    Fixture fx{"example2", VariationalProblem{L, a, b, alpha, beta, params}};

    const double c = (alpha - beta) / (a - b);
    const double d = (beta * a - b * alpha) / (a - b);
    fx.solution = make_function([c, d](double t) { return c * t + d; },
                                [c](double) { return c; }, "example2 extremal");
    fx.solution_value = evaluate_functional(fx.problem, fx.solution);

    fx.has_gauge = true;
    fx.fbar.f = [](double, double, double v) { return v * v; };
    fx.fbar.d2 = [](double, double, double) { return 0.0; };
    fx.fbar.d3 = [](double, double, double v) { return 2.0 * v; };
    fx.transform.forward = [c, d](double t, double w) { return w + c * t + d; };
    fx.transform.inverse = [c, d](double t, double y) { return y - c * t - d; };
    fx.gauge.G = [c, d](double t, double w) {
        return 2.0 * c * w + t * w + c * t * t + (c * c + d) * t;
    };
    return fx;
}

Fixture make_example4(const QOmegaParams& params, double a, double b, double alpha,
                      double beta) {
    if (alpha == beta) throw ValidationError("example4 requires alpha != beta");
    RealFunction g = builtin("leitmann_g");
    QLattice lattice = QLattice::build(params, a, b, 40);
    for (double t : lattice.points()) {
        if (std::abs(g(t)) <= 1e-12) {
            throw ValidationError("example4 requires g nonvanishing on the lattice");
        }
    }

    auto Dg = [params, g](double t) { return hahn_derivative(params, g, t); };
    Lagrangian L;
    L.f = [g, Dg](double t, double u, double v) {
        const double inner = u * Dg(t) + v * g(t);
        return inner * inner;
    };
    L.d2 = [g, Dg](double t, double u, double v) {
        return 2.0 * (u * Dg(t) + v * g(t)) * Dg(t);
    };
    L.d3 = [g, Dg](double t, double u, double v) {
        return 2.0 * (u * Dg(t) + v * g(t)) * g(t);
    };
    Fixture fx{"example4", VariationalProblem{L, a, b, alpha, beta, params}};

    const double A = (alpha * g(a) - beta * g(b)) / (a - b);
    const double C = (a * beta * g(b) - b * alpha * g(a)) / (a - b);
    fx.solution = make_function(
        [g, A, C](double t) { return (A * t + C) / g(t); },
        [g, A, C](double t) {
            const double gv = g(t);
            return (A * gv - (A * t + C) * g.classical_derivative(t)) / (gv * gv);
        },
        "example4 extremal");
    fx.solution_value = evaluate_functional(fx.problem, fx.solution);

    // y = ybar + (At+B)/g closes the Lagrangian difference with a gauge
    // linear in ybar; the fixture pairs the extremal with ybar = 1/g
    const double B = C - 1.0;
    fx.has_gauge = true;
    fx.fbar = L;
    fx.transform.forward = [g, A, B](double t, double w) { return w + (A * t + B) / g(t); };
    fx.transform.inverse = [g, A, B](double t, double y) { return y - (A * t + B) / g(t); };
    fx.gauge.G = [g, A, B](double t, double w) {
        return A * (2.0 * w * g(t) + A * t + B);
    };
    return fx;
}

Fixture make_control(const QOmegaParams& params) {
    Fixture fx{"example3_control",
               VariationalProblem{Lagrangian{}, 0.0, 1.0, 0.0, 0.0, params}};
    fx.is_control = true;
    fx.expected_minimum = 1.0;
    fx.control_optimum.y1 = make_function([](double t) { return 2.0 * t; },
                                          [](double) { return 2.0; }, "y1 = 2t");
    fx.control_optimum.y2 = make_function([](double t) { return t; },
                                          [](double) { return 1.0; }, "y2 = t");
    fx.control_optimum.u1 = make_function([](double) { return 0.0; }, "u1 = 0");
    fx.control_optimum.u2 = make_function([](double) { return 1.0; }, "u2 = 1");
    return fx;
}

}  // namespace

Fixture fixture(std::string_view name, const QOmegaParams& params) {
    if (name == "example1") return make_example1(params, 0.0, 1.0, 0.0, 1.0);
    if (name == "example2") return make_example2(params, 0.0, 1.0, 0.0, 1.0);
    if (name == "example4") return make_example4(params, 0.0, 1.0, 1.0, 2.0 / 3.0);
    if (name == "example3_control") return make_control(params);
    throw UnknownFixture("unknown fixture '" + std::string(name) + "'");
}

Fixture fixture(std::string_view name, const QOmegaParams& params, double a, double b,
                double alpha, double beta) {
    if (!(a < b)) throw ValidationError("fixture requires a < b");
    if (name == "example1") return make_example1(params, a, b, alpha, beta);
    if (name == "example2") return make_example2(params, a, b, alpha, beta);
    if (name == "example4") return make_example4(params, a, b, alpha, beta);
    if (name == "example3_control") {
        throw ValidationError("example3_control is fixed to [0,1] with its own data");
    }
    throw UnknownFixture("unknown fixture '" + std::string(name) + "'");
}

}  // namespace hahn
