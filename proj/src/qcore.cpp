#include "hahn/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hahn/errors.hpp"

namespace hahn {

QOmegaParams::QOmegaParams(double q, double omega) : q_(q), omega_(omega) {
    if (!(q > 0.0 && q < 1.0)) {
        throw ValidationError("q must lie in (0,1), got " + std::to_string(q));
    }
    if (!(omega > 0.0)) {
        throw ValidationError("omega must be positive, got " + std::to_string(omega));
    }
    omega0_ = omega / (1.0 - q);
    snap_tol_ = 1e-14 * std::max(1.0, std::abs(omega0_));
}

double QOmegaParams::bracket(int k) const {
    if (k < 0) throw ValidationError("bracket index must be nonnegative");
    return omega_ * (1.0 - std::pow(q_, k)) / (1.0 - q_);
}

bool QOmegaParams::at_fixed_point(double t) const {
    return std::abs(t - omega0_) <= snap_tol_;
}

QLattice::QLattice(const QOmegaParams& params, double a, double b, int depth)
    : params_(params), a_(a), b_(b), depth_(depth) {}

QLattice QLattice::build(const QOmegaParams& params, double a, double b, int depth) {
    if (!(a < b)) throw ValidationError("lattice requires a < b");
    if (depth < 1) throw ValidationError("lattice depth must be >= 1");
    const double w0 = params.omega0();
    const bool a_fixed = params.at_fixed_point(a);
    const bool b_fixed = params.at_fixed_point(b);
    if (a_fixed && b_fixed) {
        throw DegenerateSeed("both seeds coincide with omega0");
    }

    QLattice lat(params, a, b, depth);
    auto run_branch = [&](double seed, std::vector<double>& out) {
        if (params.at_fixed_point(seed)) return;  // orbit is constant
        out.reserve(static_cast<std::size_t>(depth) + 1);
        double p = seed;
        out.push_back(p);
        for (int n = 0; n < depth; ++n) {
            p = params.jump(p);
            out.push_back(p);
        }
        lat.tail_gap_ = std::max(lat.tail_gap_, std::abs(p - w0));
    };
    run_branch(a, lat.branch_a_);
    run_branch(b, lat.branch_b_);

    lat.bracket_coeffs_.reserve(static_cast<std::size_t>(depth) + 1);
    for (int k = 0; k <= depth; ++k) lat.bracket_coeffs_.push_back(params.bracket(k));

    std::vector<double> pts;
    pts.reserve(lat.branch_a_.size() + lat.branch_b_.size() + 1);
    for (double p : lat.branch_a_) pts.push_back(params.snap(p));
    for (double p : lat.branch_b_) pts.push_back(params.snap(p));
    pts.push_back(w0);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    lat.points_ = std::move(pts);
    lat.omega0_index_ = static_cast<std::size_t>(
        std::lower_bound(lat.points_.begin(), lat.points_.end(), w0) - lat.points_.begin());
    return lat;
}

std::span<const double> QLattice::branch(int i) const {
    if (i == 0) return branch_a_;
    if (i == 1) return branch_b_;
    throw ValidationError("branch index must be 0 or 1");
}

std::optional<std::size_t> QLattice::find(double t) const {
    t = params_.snap(t);
    auto it = std::lower_bound(points_.begin(), points_.end(), t);
    const double tol = params_.snap_tol();
    if (it != points_.end() && std::abs(*it - t) <= tol) {
        return static_cast<std::size_t>(it - points_.begin());
    }
    if (it != points_.begin() && std::abs(*(it - 1) - t) <= tol) {
        return static_cast<std::size_t>(it - points_.begin()) - 1;
    }
    return std::nullopt;
}

int depth_for_tol(const QOmegaParams& params, double a, double b, double tol) {
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    const double w0 = params.omega0();
    const double reach = std::max(std::abs(a - w0), std::abs(b - w0));
    if (reach < tol) return 1;
    // q^N reach < tol
    const int n = static_cast<int>(std::ceil(std::log(tol / reach) / std::log(params.q())));
    return std::max(1, n);
}

}  // namespace hahn
