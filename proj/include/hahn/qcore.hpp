#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hahn {

/// The pair (q, omega) with 0 < q < 1 and omega > 0, together with the
/// fixed point omega0 = omega/(1-q) of the jump map t -> qt + omega.
class QOmegaParams {
public:
    QOmegaParams(double q, double omega);

    double q() const { return q_; }
    double omega() const { return omega_; }
    double omega0() const { return omega0_; }

    /// The jump map eta(t) = qt + omega. Contraction with fixed point omega0.
    double jump(double t) const { return q_ * t + omega_; }

    /// [k]_{q,omega} = omega (1 - q^k) / (1 - q); the shift after k jumps.
    double bracket(int k) const;

    /// Absolute tolerance used for snapping points onto omega0.
    double snap_tol() const { return snap_tol_; }
    bool at_fixed_point(double t) const;
    /// Replaces t with omega0 when within snap tolerance.
    double snap(double t) const { return at_fixed_point(t) ? omega0_ : t; }

private:
    double q_;
    double omega_;
    double omega0_;
    double snap_tol_;
};

/// Truncated enumeration of [a,b]_{q,omega}: the two jump orbits started
/// at the seeds a and b, followed down to the given depth, plus omega0.
class QLattice {
public:
    static QLattice build(const QOmegaParams& params, double a, double b, int depth);

    const QOmegaParams& params() const { return params_; }
    double a() const { return a_; }
    double b() const { return b_; }
    int depth() const { return depth_; }

    /// Orbit of seed i (0 = a, 1 = b) in generation order; size depth+1.
    /// Empty when the seed coincides with omega0.
    std::span<const double> branch(int i) const;

    /// Sorted, deduplicated points including omega0 exactly once.
    const std::vector<double>& points() const { return points_; }

    /// max over seeds of |q^N s + [N] - omega0|.
    double tail_gap() const { return tail_gap_; }

    std::size_t omega0_index() const { return omega0_index_; }

    /// Index of t among points(); exact match first, then snap tolerance.
    std::optional<std::size_t> find(double t) const;
    bool contains(double t) const { return find(t).has_value(); }

    /// [k]_{q,omega} for 0 <= k <= depth.
    const std::vector<double>& bracket_coeffs() const { return bracket_coeffs_; }

private:
    QLattice(const QOmegaParams& params, double a, double b, int depth);

    QOmegaParams params_;
    double a_, b_;
    int depth_;
    std::vector<double> branch_a_, branch_b_;
    std::vector<double> points_;
    std::vector<double> bracket_coeffs_;
    double tail_gap_ = 0.0;
    std::size_t omega0_index_ = 0;
};

/// Smallest N with q^N max(|a - omega0|, |b - omega0|) < tol.
int depth_for_tol(const QOmegaParams& params, double a, double b, double tol);

}  // namespace hahn
