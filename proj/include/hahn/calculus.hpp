#pragma once

#include <functional>
#include <string>

#include "hahn/qcore.hpp"

namespace hahn {

/// A real-valued function handle. The classical derivative, when present,
/// is consulted only at the fixed point omega0.
struct RealFunction {
    std::function<double(double)> eval;
    std::function<double(double)> classical_derivative;  // may be empty
    std::string label;

    double operator()(double t) const { return eval(t); }
    bool has_derivative() const { return static_cast<bool>(classical_derivative); }
};

RealFunction make_function(std::function<double(double)> eval, std::string label = {});
RealFunction make_function(std::function<double(double)> eval,
                           std::function<double(double)> classical_derivative,
                           std::string label = {});

struct IntegrationConfig {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    int max_terms = 10000;
};

/// Compensated accumulator; deterministic fixed-order summation.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double value) {
        const double y = value - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

/// The Hahn difference quotient (f(qt+w) - f(t)) / ((qt+w) - t); at the
/// fixed point omega0 the classical derivative (analytic if supplied,
/// otherwise a limit along the lattice sequence toward omega0).
double hahn_derivative(const QOmegaParams& params, const RealFunction& f, double t);

/// Closed form for D of t -> (at+b)^n away from the fixed point.
double power_rule(const QOmegaParams& params, double a, double b, int n, double t);

struct IntegralResult {
    double value = 0.0;
    int terms = 0;             // truncation index (max over both endpoint series)
    double tail_estimate = 0.0;
};

/// Jackson-Norlund integral from omega0 to x: the adaptive partial sum of
/// (x(1-q)-w) sum_k q^k f(x q^k + [k]).
IntegralResult integral_from_omega0(const QOmegaParams& params, const RealFunction& f,
                                    double x, const IntegrationConfig& cfg = {});

/// Integral over [a,b], anchored at omega0.
IntegralResult qomega_integral(const QOmegaParams& params, const RealFunction& f,
                               double a, double b, const IntegrationConfig& cfg = {});

struct ExpResult {
    double value = 1.0;
    bool zero_factor = false;
    int factors = 0;
};

/// q,omega-exponential E(z,t) = prod_k (1 + z q^k (t(1-q) - w)), truncated
/// once the perturbation |z q^k (t(1-q)-w)| drops below rel_tol.
/// A vanishing factor makes the product exactly 0; reported, not an error.
ExpResult qomega_exp(const QOmegaParams& params, double z, double t,
                     const IntegrationConfig& cfg = {});

namespace detail {
/// Difference quotient with an exact fixed-point test (no snap tolerance);
/// used inside series evaluation where near-omega0 points are legal inputs.
double raw_quotient(const QOmegaParams& params, const RealFunction& f, double t);
}  // namespace detail

}  // namespace hahn
