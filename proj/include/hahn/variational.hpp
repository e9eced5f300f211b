#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hahn/calculus.hpp"
#include "hahn/qcore.hpp"

namespace hahn {

/// Integrand f(t, u, v) with u = y(qt+w) and v = Dy(t). Partials in u and v
/// fall back to central finite differences when not supplied analytically.
struct Lagrangian {
    std::function<double(double, double, double)> f;
    std::function<double(double, double, double)> d2;  // partial in u; optional
    std::function<double(double, double, double)> d3;  // partial in v; optional

    double operator()(double t, double u, double v) const { return f(t, u, v); }
    double du(double t, double u, double v) const;
    double dv(double t, double u, double v) const;
};

struct VariationalProblem {
    Lagrangian lagrangian;
    double a;
    double b;
    double alpha;  // y(a)
    double beta;   // y(b)
    QOmegaParams params;
};

struct IsoperimetricConstraint {
    Lagrangian g;
    double k;
};

/// y restricted to a truncated lattice; values aligned with lattice.points().
class LatticeTrajectory {
public:
    LatticeTrajectory(QLattice lattice, std::vector<double> values);
    static LatticeTrajectory sample(QLattice lattice, const RealFunction& y);

    const QLattice& lattice() const { return lattice_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    /// Value at a lattice point; MissingNeighbor if t is not on the lattice.
    double value_at(double t) const;

private:
    QLattice lattice_;
    std::vector<double> values_;
};

/// Difference quotient toward the jump neighbour; at omega0 the average of
/// one-sided limits estimated from the deepest three points of each branch.
double lattice_derivative(const LatticeTrajectory& traj, double t);

/// L[y] via the Jackson-Norlund series of the integrand t -> f(t, y(qt+w), Dy(t)).
/// Boundary mismatch beyond 1e-10 is reported through *warning, not an error.
double evaluate_functional(const VariationalProblem& problem, const RealFunction& y,
                           const IntegrationConfig& cfg = {}, std::string* warning = nullptr);

/// Truncated counterpart for a lattice trajectory: the series over both seed
/// branches cut at lattice depth, the deepest term closed against omega0.
double evaluate_functional(const VariationalProblem& problem, const LatticeTrajectory& y,
                           std::string* warning = nullptr);

/// D[ t -> d3f(t, y(qt+w), Dy(t)) ](t) - d2f(t, y(qt+w), Dy(t)).
double el_residual(const VariationalProblem& problem, const RealFunction& y, double t);
double el_residual(const VariationalProblem& problem, const LatticeTrajectory& y, double t);

struct SolveOptions {
    /// Tolerance on the curvature-scaled gradient max_j |g_j| / max(1, H_jj);
    /// the raw gradient of the deepest series terms sits on a rounding noise
    /// floor of order q^-depth * eps and cannot be driven to zero directly.
    double grad_tol = 1e-8;
    int max_iters = 200000;
    double armijo_c = 1e-4;
    double shrink = 0.5;
};

struct SolveResult {
    LatticeTrajectory trajectory;
    double objective = 0.0;
    double grad_norm = 0.0;  // curvature-scaled gradient max-norm at exit
    int iterations = 0;
};

/// Direct minimization of the truncated functional over lattice values with
/// pinned boundary values. Deterministic given fixed options.
SolveResult solve_direct(const VariationalProblem& problem, int depth,
                         const SolveOptions& opts = {});

/// EL residual of F = lambda0 f - lambda g at t.
double isoperimetric_residual(const VariationalProblem& problem,
                              const IsoperimetricConstraint& constraint,
                              const RealFunction& y, double lambda, double lambda0, double t);

struct MultiplierEstimate {
    double lambda0 = 0.0;
    double lambda = 0.0;
    double residual_norm = 0.0;
};

/// Least-squares unit-norm (lambda0, lambda), lambda0 >= 0, minimizing the
/// combined residual over t_set. residual_norm distinguishes a genuine
/// multiplier from a candidate unrelated to the problem.
MultiplierEstimate estimate_multiplier(const VariationalProblem& problem,
                                       const IsoperimetricConstraint& constraint,
                                       const RealFunction& y, std::span<const double> t_set);

/// Two-component integrand f(t, u1, u2, v1, v2); finite-difference partials.
struct Lagrangian2 {
    std::function<double(double, double, double, double, double)> f;

    double operator()(double t, double u1, double u2, double v1, double v2) const {
        return f(t, u1, u2, v1, v2);
    }
    double partial(int arg, double t, double u1, double u2, double v1, double v2) const;
};

struct VariationalProblem2 {
    Lagrangian2 lagrangian;
    double a;
    double b;
    double y1a, y2a;
    double y1b, y2b;
    QOmegaParams params;
};

struct NonholonomicResidual {
    double component1 = 0.0;
    double component2 = 0.0;
    double constraint_violation = 0.0;
};

/// EL residuals of the augmented integrand f - lambda(t) g, one per component,
/// plus the pointwise violation of g itself.
NonholonomicResidual nonholonomic_residual(const VariationalProblem2& problem,
                                           const Lagrangian2& g_constraint,
                                           const RealFunction& multiplier,
                                           const RealFunction& y1, const RealFunction& y2,
                                           double t);

struct ConvexityReport {
    bool passed = true;
    double worst_margin = 0.0;  // min over samples of lhs - rhs; negative fails
    int samples = 0;
    // Monte-Carlo evidence only; a pass does not prove joint convexity.
};

ConvexityReport check_joint_convexity(const Lagrangian& lagrangian,
                                      std::span<const double> t_set, int sample_count,
                                      std::uint64_t seed = 0x9e3779b97f4a7c15ull);

}  // namespace hahn
