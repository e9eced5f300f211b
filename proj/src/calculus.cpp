#include "hahn/calculus.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hahn/errors.hpp"

namespace hahn {

RealFunction make_function(std::function<double(double)> eval, std::string label) {
    return RealFunction{std::move(eval), {}, std::move(label)};
}

RealFunction make_function(std::function<double(double)> eval,
                           std::function<double(double)> classical_derivative,
                           std::string label) {
    return RealFunction{std::move(eval), std::move(classical_derivative), std::move(label)};
}

namespace {

/// Limit of the difference quotient along t_n = jump^n(omega0 + 1).
///
/// For a smooth f the quotients follow q_n = L + c1 q^n + c2 q^(2n) + ...;
/// two levels of Richardson extrapolation cancel the first two terms, so the
/// accelerated sequence settles while the gap to omega0 is still of order
/// 1e-3. That margin matters: when f itself contains difference quotients
/// (momentum paths do), its evaluations carry rounding noise of order
/// eps/gap that the outer quotient amplifies to eps/gap^2, and the raw
/// sequence drowns in it long before it would agree on its own.
double fixed_point_limit(const QOmegaParams& params, const RealFunction& f) {
    constexpr int kMaxSteps = 400;
    constexpr double kStrictTol = 1e-9;  // early exit for smooth/exact cases
    constexpr double kLooseTol = 1e-6;   // best-effort bound at the noise floor
    const double r = params.q();
    const double k1 = r / (1.0 - r);
    const double k2 = (r * r) / (1.0 - r * r);
    const double w0 = params.omega0();
    const double gap_floor = std::cbrt(std::numeric_limits<double>::epsilon()) *
                             std::max(1.0, std::abs(w0));
    double t = w0 + 1.0;
    std::vector<double> quot;
    quot.reserve(64);
    double prev = 0.0;
    bool have_prev = false;
    int agree = 0;
    double best_delta = std::numeric_limits<double>::infinity();
    double best_value = 0.0;
    for (int n = 0; n < kMaxSteps; ++n) {
        const double s = params.jump(t);
        if (s == t || std::abs(t - w0) < gap_floor) break;
        quot.push_back((f(s) - f(t)) / (s - t));
        if (quot.size() >= 3) {
            const std::size_t m = quot.size();
            const double r1a = quot[m - 2] + (quot[m - 2] - quot[m - 3]) * k1;
            const double r1b = quot[m - 1] + (quot[m - 1] - quot[m - 2]) * k1;
            const double r2 = r1b + (r1b - r1a) * k2;
            if (have_prev) {
                const double scale = std::max({std::abs(r2), std::abs(prev), 1.0});
                const double delta = std::abs(r2 - prev);
                if (delta <= kStrictTol * scale) {
                    if (++agree >= 2) return r2;
                } else {
                    agree = 0;
                }
                if (delta / scale < best_delta) {
                    best_delta = delta / scale;
                    best_value = r2;
                }
            }
            prev = r2;
            have_prev = true;
        }
        t = s;
    }
    // rough integrands (their own quotients feed the outer one) hit an
    // eps/gap^2 noise floor before the strict test can fire; the estimate at
    // the smallest consecutive change is then the best available value
    if (best_delta <= kLooseTol) return best_value;
    throw DerivativeAtFixedPointUnavailable(
        "no analytic derivative at omega0 and the lattice limit did not settle for '" +
        f.label + "'");
}

}  // namespace

double hahn_derivative(const QOmegaParams& params, const RealFunction& f, double t) {
    if (params.at_fixed_point(t)) {
        if (f.has_derivative()) return f.classical_derivative(params.omega0());
        return fixed_point_limit(params, f);
    }
    const double s = params.jump(t);
    return (f(s) - f(t)) / (s - t);
}

namespace detail {

double raw_quotient(const QOmegaParams& params, const RealFunction& f, double t) {
    const double s = params.jump(t);
    if (s == t) {
        if (f.has_derivative()) return f.classical_derivative(t);
        return fixed_point_limit(params, f);
    }
    return (f(s) - f(t)) / (s - t);
}

}  // namespace detail

double power_rule(const QOmegaParams& params, double a, double b, int n, double t) {
    if (n < 1) throw ValidationError("power rule requires n >= 1");
    if (params.at_fixed_point(t)) {
        throw FixedPointInput("power rule is not defined at omega0");
    }
    const double shifted = a * params.jump(t) + b;
    const double base = a * t + b;
    // sum_{k=0}^{n-1} shifted^k base^{n-k-1}
    double sum = 0.0;
    double sp = 1.0;
    for (int k = 0; k < n; ++k) {
        double bp = 1.0;
        for (int j = 0; j < n - k - 1; ++j) bp *= base;
        sum += sp * bp;
        sp *= shifted;
    }
    return a * sum;
}

IntegralResult integral_from_omega0(const QOmegaParams& params, const RealFunction& f,
                                    double x, const IntegrationConfig& cfg) {
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0) || cfg.max_terms < 1) {
        throw ValidationError("invalid integration config");
    }
    const double prefactor = x * (1.0 - params.q()) - params.omega();
    IntegralResult res;
    if (params.at_fixed_point(x) || prefactor == 0.0) {
        return res;  // the prefactor vanishes at the fixed point
    }

    KahanSum acc;
    double point = x;
    double weight = 1.0;
    int small_streak = 0;
    double last_term = 0.0;
    bool converged = false;
    int k = 0;
    for (; k < cfg.max_terms; ++k) {
        const double fv = f(point);
        if (!std::isfinite(fv)) {
            throw SeriesNotConverged("integrand not finite at lattice point of the series");
        }
        const double term = weight * fv;
        acc.add(term);
        last_term = term;
        if (k >= 8 && std::abs(term) < cfg.abs_tol + cfg.rel_tol * std::abs(acc.value())) {
            if (++small_streak >= 3) {
                converged = true;
                ++k;
                break;
            }
        } else {
            small_streak = 0;
        }
        point = params.jump(point);
        weight *= params.q();
    }
    if (!converged) {
        throw SeriesNotConverged("Jackson-Norlund series did not converge within " +
                                 std::to_string(cfg.max_terms) + " terms");
    }
    res.value = prefactor * acc.value();
    res.terms = k;
    // geometric tail bound from the last accepted term
    res.tail_estimate = std::abs(prefactor * last_term) * params.q() / (1.0 - params.q());
    return res;
}

IntegralResult qomega_integral(const QOmegaParams& params, const RealFunction& f,
                               double a, double b, const IntegrationConfig& cfg) {
    const IntegralResult fb = integral_from_omega0(params, f, b, cfg);
    const IntegralResult fa = integral_from_omega0(params, f, a, cfg);
    IntegralResult res;
    res.value = fb.value - fa.value;
    res.terms = std::max(fb.terms, fa.terms);
    res.tail_estimate = fb.tail_estimate + fa.tail_estimate;
    return res;
}

ExpResult qomega_exp(const QOmegaParams& params, double z, double t,
                     const IntegrationConfig& cfg) {
    ExpResult res;
    const double c = t * (1.0 - params.q()) - params.omega();
    if (z == 0.0 || c == 0.0 || params.at_fixed_point(t)) {
        res.value = 1.0;
        return res;
    }
    double prod = 1.0;
    double zc = z * c;
    int k = 0;
    for (; k < cfg.max_terms; ++k) {
        const double factor = 1.0 + zc;
        if (factor == 0.0) {
            res.value = 0.0;
            res.zero_factor = true;
            res.factors = k + 1;
            return res;
        }
        prod *= factor;
        zc *= params.q();
        if (std::abs(zc) < cfg.rel_tol) {
            res.value = prod;
            res.factors = k + 1;
            return res;
        }
    }
    throw NonConvergence("q,omega-exponential product did not converge within " +
                         std::to_string(cfg.max_terms) + " factors");
}

}  // namespace hahn
