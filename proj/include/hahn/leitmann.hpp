#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hahn/calculus.hpp"
#include "hahn/qcore.hpp"
#include "hahn/variational.hpp"

namespace hahn {

/// Invertible coordinate change y = forward(t, ybar), ybar = inverse(t, y).
struct Transformation {
    std::function<double(double, double)> forward;
    std::function<double(double, double)> inverse;

    static Transformation identity();
};

/// Gauge term G(t, ybar) whose q,omega-derivative along a path closes the
/// Lagrangian difference in Leitmann's identity.
struct GaugeTerm {
    std::function<double(double, double)> G;

    static GaugeTerm zero();
};

/// Defect of the identity f(t, y(qt+w), Dy) - fbar(t, ybar(qt+w), Dybar)
/// - D[s -> G(s, ybar(s))](t), with y the forward transform of ybar.
/// Zero within 1e-10 certifies the identity at t.
double verify_gauge_identity(const QOmegaParams& params, const Lagrangian& f,
                             const Lagrangian& fbar, const Transformation& transform,
                             const GaugeTerm& gauge, const RealFunction& ybar, double t);

struct ConstantDifferenceReport {
    std::vector<double> differences;  // L[y] - Lbar[ybar], one per sample
    double spread = 0.0;              // max - min over the differences
    bool passed = false;              // spread <= tolerance (1e-8)
};

/// Constancy of L[y] - Lbar[ybar] across admissible samples: the operative
/// content of Leitmann's lemma. ybar is obtained via the inverse transform.
ConstantDifferenceReport verify_constant_difference(
    const QOmegaParams& params, const Lagrangian& f, const Lagrangian& fbar,
    const Transformation& transform, std::span<const RealFunction> y_samples, double a,
    double b, const IntegrationConfig& cfg = {}, double tol = 1e-8);

/// State/control tuple for the quantum control fixture on [0,1].
struct ControlTrajectories {
    RealFunction y1;
    RealFunction y2;
    RealFunction u1;
    RealFunction u2;
};

struct ControlInvarianceReport {
    double shift_error = 0.0;       // |L^s - L - (s^2 + 2s)|
    double covariance_error = 0.0;  // max pointwise defect of the control system
    double null_value = 0.0;        // L^{s=-1} at the null controls
    double null_boundary_error = 0.0;
    double optimum_value = 0.0;     // L at (u1,u2,y1,y2) = (0,1,2t,t)
    bool passed = false;
};

/// Checks, for the invariance family y1 -> y1+st, y2 -> y2+st, u2 -> u2+s:
/// (i) the functional shift L^s = L + s^2 + 2s, (ii) pointwise covariance of
/// the control system on the lattice, (iii) admissibility and zero value of
/// the null controls at s = -1, (iv) that the mapped-back optimum attains 1.
/// ConstraintViolation if the input controls leave [-1,1] on the lattice.
ControlInvarianceReport verify_control_invariance(const QOmegaParams& params, double s,
                                                  const ControlTrajectories& trajectories,
                                                  const IntegrationConfig& cfg = {},
                                                  int depth = 30);

}  // namespace hahn
