#include "hahn/variational.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "hahn/errors.hpp"

namespace hahn {

namespace {

double fd_step(double x) {
    static const double h0 = std::cbrt(std::numeric_limits<double>::epsilon());
    return h0 * std::max(1.0, std::abs(x));
}

}  // namespace

double Lagrangian::du(double t, double u, double v) const {
    if (d2) return d2(t, u, v);
    const double h = fd_step(u);
    return (f(t, u + h, v) - f(t, u - h, v)) / (2.0 * h);
}

double Lagrangian::dv(double t, double u, double v) const {
    if (d3) return d3(t, u, v);
    const double h = fd_step(v);
    return (f(t, u, v + h) - f(t, u, v - h)) / (2.0 * h);
}

double Lagrangian2::partial(int arg, double t, double u1, double u2, double v1,
                            double v2) const {
    double args[4] = {u1, u2, v1, v2};
    if (arg < 1 || arg > 4) throw ValidationError("Lagrangian2 partial index must be 1..4");
    const double h = fd_step(args[arg - 1]);
    args[arg - 1] += h;
    const double fp = f(t, args[0], args[1], args[2], args[3]);
    args[arg - 1] -= 2.0 * h;
    const double fm = f(t, args[0], args[1], args[2], args[3]);
    return (fp - fm) / (2.0 * h);
}

LatticeTrajectory::LatticeTrajectory(QLattice lattice, std::vector<double> values)
    : lattice_(std::move(lattice)), values_(std::move(values)) {
    if (values_.size() != lattice_.points().size()) {
        throw ValidationError("trajectory values must match lattice points");
    }
}

LatticeTrajectory LatticeTrajectory::sample(QLattice lattice, const RealFunction& y) {
    std::vector<double> vals;
    vals.reserve(lattice.points().size());
    for (double p : lattice.points()) vals.push_back(y(p));
    return LatticeTrajectory(std::move(lattice), std::move(vals));
}

double LatticeTrajectory::value_at(double t) const {
    auto idx = lattice_.find(t);
    if (!idx) throw MissingNeighbor("point is not on the lattice");
    return values_[*idx];
}

namespace {

/// Average of the quotients (F(w0) - F(p)) / (w0 - p) over up to three points
/// per branch, the deepest ones whose gap to omega0 still exceeds min_gap.
/// Points closer than min_gap trade truncation error for rounding noise.
double fixed_point_quotient_limit(const QLattice& lat,
                                  const std::function<double(double)>& F,
                                  double f_w0, double min_gap, int skip_tail) {
    const double w0 = lat.params().omega0();
    double sum = 0.0;
    int branches = 0;
    for (int i = 0; i < 2; ++i) {
        auto br = lat.branch(i);
        double est = 0.0;
        int used = 0;
        const std::size_t n = br.size() > static_cast<std::size_t>(skip_tail)
                                  ? br.size() - static_cast<std::size_t>(skip_tail)
                                  : 0;
        for (std::size_t j = n; j-- > 0 && used < 3;) {
            const double p = br[j];
            if (std::abs(p - w0) < min_gap) continue;
            est += (f_w0 - F(p)) / (w0 - p);
            ++used;
        }
        if (used > 0) {
            sum += est / used;
            ++branches;
        }
    }
    if (branches == 0) throw MissingNeighbor("no branch points available near omega0");
    return sum / branches;
}

}  // namespace

double lattice_derivative(const LatticeTrajectory& traj, double t) {
    const QLattice& lat = traj.lattice();
    const QOmegaParams& params = lat.params();
    const double w0 = params.omega0();
    if (params.at_fixed_point(t)) {
        // one-sided limits; gap floor sqrt(eps) balances noise vs truncation
        const double min_gap =
            std::sqrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(w0));
        return fixed_point_quotient_limit(
            lat, [&traj](double p) { return traj.value_at(p); }, traj.value_at(w0),
            min_gap, 0);
    }
    const double s = params.jump(t);
    auto idx = traj.lattice().find(s);
    if (!idx) throw MissingNeighbor("jump neighbour beyond lattice depth");
    return (traj[*idx] - traj.value_at(t)) / (s - t);
}

double evaluate_functional(const VariationalProblem& problem, const RealFunction& y,
                           const IntegrationConfig& cfg, std::string* warning) {
    const QOmegaParams& params = problem.params;
    if (warning) {
        warning->clear();
        if (std::abs(y(problem.a) - problem.alpha) > 1e-10 ||
            std::abs(y(problem.b) - problem.beta) > 1e-10) {
            *warning = "candidate violates the boundary values";
        }
    }
    RealFunction integrand = make_function(
        [&problem, &params, &y](double t) {
            const double u = y(params.jump(t));
            const double v = detail::raw_quotient(params, y, t);
            return problem.lagrangian(t, u, v);
        },
        "variational integrand");
    return qomega_integral(params, integrand, problem.a, problem.b, cfg).value;
}

namespace {

/// Truncated Jackson-Norlund objective over the two seed branches with the
/// lattice values as unknowns; the deepest term is closed against omega0.
class DiscreteObjective {
public:
    DiscreteObjective(const VariationalProblem& problem, const QLattice& lattice)
        : problem_(&problem), lattice_(&lattice) {
        const QOmegaParams& params = lattice.params();
        w0_ = params.omega0();
        for (int i = 0; i < 2; ++i) {
            auto br = lattice.branch(i);
            pts_[i].assign(br.begin(), br.end());
            if (!pts_[i].empty()) {
                pref_[i] = pts_[i][0] * (1.0 - params.q()) - params.omega();
            }
            qpow_[i].resize(pts_[i].size());
            double w = 1.0;
            for (std::size_t k = 0; k < pts_[i].size(); ++k) {
                qpow_[i][k] = w;
                w *= params.q();
            }
        }
        sign_[0] = -1.0;
        sign_[1] = +1.0;
        // unknown layout: branch interiors (indices 1..N), then omega0 value
        offset_[0] = 0;
        count_[0] = pts_[0].empty() ? 0 : static_cast<int>(pts_[0].size()) - 1;
        offset_[1] = count_[0];
        count_[1] = pts_[1].empty() ? 0 : static_cast<int>(pts_[1].size()) - 1;
        w0_slot_ = count_[0] + count_[1];
        size_ = w0_slot_ + 1;
    }

    int size() const { return size_; }

    std::vector<double> initial_guess() const {
        const double a = problem_->a;
        const double b = problem_->b;
        auto lerp = [&](double t) {
            return problem_->alpha + (problem_->beta - problem_->alpha) * (t - a) / (b - a);
        };
        std::vector<double> x(static_cast<std::size_t>(size_));
        for (int i = 0; i < 2; ++i) {
            for (int k = 1; k <= count_[i]; ++k) {
                x[static_cast<std::size_t>(offset_[i] + k - 1)] = lerp(pts_[i][static_cast<std::size_t>(k)]);
            }
        }
        x[static_cast<std::size_t>(w0_slot_)] = lerp(w0_);
        return x;
    }

    double boundary_value(int branch) const { return branch == 0 ? problem_->alpha : problem_->beta; }

    double node_value(const std::vector<double>& x, int branch, std::size_t j) const {
        if (j == pts_[branch].size()) return x[static_cast<std::size_t>(w0_slot_)];
        if (j == 0) return boundary_value(branch);
        return x[static_cast<std::size_t>(offset_[branch]) + j - 1];
    }

    double value(const std::vector<double>& x) const {
        const Lagrangian& L = problem_->lagrangian;
        KahanSum acc;
        for (int i = 0; i < 2; ++i) {
            const std::size_t n = pts_[i].size();
            for (std::size_t k = 0; k < n; ++k) {
                const double p = pts_[i][k];
                const double pn = (k + 1 < n) ? pts_[i][k + 1] : w0_;
                if (pn == p) continue;
                const double u = node_value(x, i, k + 1);
                const double quot = (u - node_value(x, i, k)) / (pn - p);
                acc.add(sign_[i] * pref_[i] * qpow_[i][k] * L(p, u, quot));
            }
        }
        return acc.value();
    }

    void gradient(const std::vector<double>& x, std::vector<double>& g) const {
        const Lagrangian& L = problem_->lagrangian;
        g.assign(static_cast<std::size_t>(size_), 0.0);
        auto add = [&](int branch, std::size_t j, double v) {
            if (j == pts_[branch].size()) {
                g[static_cast<std::size_t>(w0_slot_)] += v;
            } else if (j >= 1) {
                g[static_cast<std::size_t>(offset_[branch]) + j - 1] += v;
            }
            // j == 0 is a pinned boundary value
        };
        for (int i = 0; i < 2; ++i) {
            const std::size_t n = pts_[i].size();
            for (std::size_t k = 0; k < n; ++k) {
                const double p = pts_[i][k];
                const double pn = (k + 1 < n) ? pts_[i][k + 1] : w0_;
                if (pn == p) continue;
                const double u = node_value(x, i, k + 1);
                const double quot = (u - node_value(x, i, k)) / (pn - p);
                const double w = sign_[i] * pref_[i] * qpow_[i][k];
                const double du = w * L.du(p, u, quot);
                const double dv = w * L.dv(p, u, quot) / (pn - p);
                add(i, k + 1, du + dv);
                add(i, k, -dv);
            }
        }
    }

    LatticeTrajectory to_trajectory(const std::vector<double>& x) const {
        const QLattice& lat = *lattice_;
        std::vector<double> vals(lat.points().size(), 0.0);
        vals[lat.omega0_index()] = x[static_cast<std::size_t>(w0_slot_)];
        for (int i = 0; i < 2; ++i) {
            for (std::size_t k = 0; k < pts_[i].size(); ++k) {
                auto idx = lat.find(pts_[i][k]);
                if (idx) vals[*idx] = node_value(x, i, k);
            }
        }
        return LatticeTrajectory(lat, std::move(vals));
    }

    std::vector<double> from_trajectory(const LatticeTrajectory& traj) const {
        std::vector<double> x(static_cast<std::size_t>(size_), 0.0);
        for (int i = 0; i < 2; ++i) {
            for (int k = 1; k <= count_[i]; ++k) {
                x[static_cast<std::size_t>(offset_[i] + k - 1)] =
                    traj.value_at(pts_[i][static_cast<std::size_t>(k)]);
            }
        }
        x[static_cast<std::size_t>(w0_slot_)] = traj.value_at(w0_);
        return x;
    }

private:
    const VariationalProblem* problem_;
    const QLattice* lattice_;
    double w0_ = 0.0;
    std::array<std::vector<double>, 2> pts_;
    std::array<std::vector<double>, 2> qpow_;
    std::array<double, 2> pref_{0.0, 0.0};
    std::array<double, 2> sign_{-1.0, 1.0};
    std::array<int, 2> offset_{0, 0};
    std::array<int, 2> count_{0, 0};
    int w0_slot_ = 0;
    int size_ = 0;
};

}  // namespace

double evaluate_functional(const VariationalProblem& problem, const LatticeTrajectory& y,
                           std::string* warning) {
    if (warning) {
        warning->clear();
        if (std::abs(y.value_at(problem.a) - problem.alpha) > 1e-10 ||
            std::abs(y.value_at(problem.b) - problem.beta) > 1e-10) {
            *warning = "trajectory violates the boundary values";
        }
    }
    DiscreteObjective obj(problem, y.lattice());
    return obj.value(obj.from_trajectory(y));
}

double el_residual(const VariationalProblem& problem, const RealFunction& y, double t) {
    const QOmegaParams& params = problem.params;
    const Lagrangian& L = problem.lagrangian;
    auto Dy = [&](double s) { return hahn_derivative(params, y, s); };
    RealFunction momentum = make_function(
        [&](double s) { return L.dv(s, y(params.jump(s)), Dy(s)); }, "d3f along path");
    const double dp = hahn_derivative(params, momentum, t);
    return dp - L.du(t, y(params.jump(t)), Dy(t));
}

double el_residual(const VariationalProblem& problem, const LatticeTrajectory& y, double t) {
    const QOmegaParams& params = problem.params;
    const Lagrangian& L = problem.lagrangian;
    auto momentum = [&](double s) {
        return L.dv(s, y.value_at(params.jump(s)), lattice_derivative(y, s));
    };
    const double w0 = params.omega0();
    double dp;
    if (params.at_fixed_point(t)) {
        // limit of the momentum quotient from interior branch points (the two
        // deepest lack forward neighbours); the momentum is itself a quotient,
        // so the gap floor grows to eps^(1/4)
        const double min_gap = std::pow(std::numeric_limits<double>::epsilon(), 0.25) *
                               std::max(1.0, std::abs(w0));
        dp = fixed_point_quotient_limit(y.lattice(), momentum, momentum(w0), min_gap, 2);
    } else {
        const double s = params.jump(t);
        dp = (momentum(s) - momentum(t)) / (s - t);
    }
    return dp - L.du(t, y.value_at(params.jump(t)), lattice_derivative(y, t));
}

namespace {

// In-place LL^T factorization and solve of the SPD system A d = rhs
// (row-major n x n). Returns false on a nonpositive pivot.
bool cholesky_solve(std::vector<double> A, int n, const std::vector<double>& rhs,
                    std::vector<double>& out) {
    const auto at = [&A, n](int i, int j) -> double& {
        return A[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                 static_cast<std::size_t>(j)];
    };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = at(i, j);
            for (int k = 0; k < j; ++k) s -= at(i, k) * at(j, k);
            if (i == j) {
                if (!(s > 0.0)) return false;
                at(i, i) = std::sqrt(s);
            } else {
                at(i, j) = s / at(j, j);
            }
        }
    }
    out.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double s = rhs[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k) s -= at(i, k) * out[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(i)] = s / at(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = out[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < n; ++k) s -= at(k, i) * out[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(i)] = s / at(i, i);
    }
    return true;
}

}  // namespace

SolveResult solve_direct(const VariationalProblem& problem, int depth, const SolveOptions& opts) {
    if (depth < 3) throw ValidationError("solve_direct requires depth >= 3");
    QLattice lattice = QLattice::build(problem.params, problem.a, problem.b, depth);
    DiscreteObjective obj(problem, lattice);

    // Damped Newton on the truncated objective. The raw gradient is useless as
    // a stopping test here: the deepest series terms have curvature of order
    // q^-depth, so value rounding alone leaves a raw-gradient noise floor far
    // above any sensible tolerance. Stationarity is therefore measured on the
    // curvature-scaled gradient max_j |g_j| / max(1, H_jj), which is the
    // Newton step length scale and has a noise floor near machine epsilon.
    std::vector<double> x = obj.initial_guess();
    const int n = obj.size();
    const std::size_t un = static_cast<std::size_t>(n);
    std::vector<double> g, gp, gm, step, xt(x.size());
    std::vector<double> H(un * un);

    double fx = obj.value(x);
    double gmax = std::numeric_limits<double>::infinity();
    bool polished = false;
    int iter = 0;
    for (; iter < opts.max_iters; ++iter) {
        obj.gradient(x, g);

        // finite-difference Hessian of the analytic gradient, symmetrized
        std::vector<double> shifted = x;
        for (int j = 0; j < n; ++j) {
            const double delta = 1e-6 * std::max(1.0, std::abs(x[static_cast<std::size_t>(j)]));
            shifted[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] + delta;
            obj.gradient(shifted, gp);
            shifted[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] - delta;
            obj.gradient(shifted, gm);
            shifted[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)];
            for (int i = 0; i < n; ++i) {
                H[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)] =
                    (gp[static_cast<std::size_t>(i)] - gm[static_cast<std::size_t>(i)]) /
                    (2.0 * delta);
            }
        }
        double hmax = 1.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < i; ++j) {
                const double s = 0.5 * (H[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)] +
                                        H[static_cast<std::size_t>(j) * un + static_cast<std::size_t>(i)]);
                H[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)] = s;
                H[static_cast<std::size_t>(j) * un + static_cast<std::size_t>(i)] = s;
            }
            hmax = std::max(hmax, std::abs(H[static_cast<std::size_t>(i) * un +
                                             static_cast<std::size_t>(i)]));
        }

        gmax = 0.0;
        for (int j = 0; j < n; ++j) {
            const double scale = std::max(1.0, std::abs(H[static_cast<std::size_t>(j) * un +
                                                          static_cast<std::size_t>(j)]));
            gmax = std::max(gmax, std::abs(g[static_cast<std::size_t>(j)]) / scale);
        }
        // the per-coordinate test can under-read an error along a soft
        // Hessian mode; one polishing step after it first holds removes that
        if (gmax < opts.grad_tol) {
            if (polished) break;
            polished = true;
        } else {
            polished = false;
        }

        // Levenberg damping until the shifted Hessian factors and the Newton
        // direction both descend and pass the Armijo test
        bool stepped = false;
        double tau = 0.0;
        for (int attempt = 0; attempt < 60 && !stepped; ++attempt) {
            std::vector<double> A = H;
            for (int i = 0; i < n; ++i) {
                A[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(i)] += tau;
            }
            if (cholesky_solve(std::move(A), n, g, step)) {
                double slope = 0.0;
                for (int j = 0; j < n; ++j) {
                    slope -= g[static_cast<std::size_t>(j)] * step[static_cast<std::size_t>(j)];
                }
                if (slope < 0.0) {
                    double alpha = 1.0;
                    while (alpha > 1e-20) {
                        for (int j = 0; j < n; ++j) {
                            xt[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] -
                                alpha * step[static_cast<std::size_t>(j)];
                        }
                        const double ft = obj.value(xt);
                        if (ft <= fx + opts.armijo_c * alpha * slope) {
                            x.swap(xt);
                            fx = ft;
                            stepped = true;
                            break;
                        }
                        alpha *= opts.shrink;
                    }
                }
            }
            tau = tau == 0.0 ? 1e-10 * hmax : tau * 10.0;
        }
        if (!stepped) {
            // a polishing step may sit below the resolution of the objective
            // value; that is convergence, not a stall
            if (gmax < opts.grad_tol) break;
            throw MaxIterations("line search stalled; final scaled gradient max-norm " +
                                std::to_string(gmax), gmax);
        }
    }
    if (gmax >= opts.grad_tol) {
        throw MaxIterations("descent did not reach gradient tolerance; final max-norm " +
                            std::to_string(gmax), gmax);
    }
    SolveResult result{obj.to_trajectory(x), fx, gmax, iter};
    return result;
}

namespace {

Lagrangian combine(const Lagrangian& f, const Lagrangian& g, double lambda0, double lambda) {
    Lagrangian F;
    F.f = [f, g, lambda0, lambda](double t, double u, double v) {
        return lambda0 * f(t, u, v) - lambda * g(t, u, v);
    };
    F.d2 = [f, g, lambda0, lambda](double t, double u, double v) {
        return lambda0 * f.du(t, u, v) - lambda * g.du(t, u, v);
    };
    F.d3 = [f, g, lambda0, lambda](double t, double u, double v) {
        return lambda0 * f.dv(t, u, v) - lambda * g.dv(t, u, v);
    };
    return F;
}

}  // namespace

double isoperimetric_residual(const VariationalProblem& problem,
                              const IsoperimetricConstraint& constraint,
                              const RealFunction& y, double lambda, double lambda0, double t) {
    if (lambda == 0.0 && lambda0 == 0.0) {
        throw BothMultipliersZero("(lambda0, lambda) must not both vanish");
    }
    VariationalProblem combined = problem;
    combined.lagrangian = combine(problem.lagrangian, constraint.g, lambda0, lambda);
    return el_residual(combined, y, t);
}

MultiplierEstimate estimate_multiplier(const VariationalProblem& problem,
                                       const IsoperimetricConstraint& constraint,
                                       const RealFunction& y, std::span<const double> t_set) {
    if (t_set.size() < 2) throw ValidationError("estimate_multiplier needs at least 2 points");
    VariationalProblem gprob = problem;
    gprob.lagrangian = constraint.g;
    std::vector<double> rf, rg;
    rf.reserve(t_set.size());
    rg.reserve(t_set.size());
    for (double t : t_set) {
        rf.push_back(el_residual(problem, y, t));
        rg.push_back(el_residual(gprob, y, t));
    }
    double uu = 0.0, uw = 0.0, ww = 0.0;
    for (std::size_t i = 0; i < rf.size(); ++i) {
        uu += rf[i] * rf[i];
        uw += rf[i] * rg[i];
        ww += rg[i] * rg[i];
    }
    if (uu < 1e-24 && ww < 1e-24) {
        throw DegenerateSystem("residual vectors of f and g both vanish on t_set");
    }
    // smallest eigenpair of [[uu, -uw], [-uw, ww]]
    const double tr = uu + ww;
    const double disc = std::sqrt((uu - ww) * (uu - ww) + 4.0 * uw * uw);
    const double lam_min = 0.5 * (tr - disc);
    double v0 = uw;           // from (uu - lam) v0 - uw v1 = 0
    double v1 = uu - lam_min;
    if (std::abs(v0) + std::abs(v1) < 1e-300) {
        v0 = ww - lam_min;
        v1 = uw;
    }
    const double norm = std::hypot(v0, v1);
    MultiplierEstimate est;
    est.lambda0 = v0 / norm;
    est.lambda = v1 / norm;
    if (est.lambda0 < 0.0 || (est.lambda0 == 0.0 && est.lambda < 0.0)) {
        est.lambda0 = -est.lambda0;
        est.lambda = -est.lambda;
    }
    est.residual_norm = std::sqrt(std::max(0.0, lam_min));
    return est;
}

NonholonomicResidual nonholonomic_residual(const VariationalProblem2& problem,
                                           const Lagrangian2& g_constraint,
                                           const RealFunction& multiplier,
                                           const RealFunction& y1, const RealFunction& y2,
                                           double t) {
    const QOmegaParams& params = problem.params;
    auto augmented = [&](double s, double u1, double u2, double v1, double v2) {
        return problem.lagrangian(s, u1, u2, v1, v2) -
               multiplier(s) * g_constraint(s, u1, u2, v1, v2);
    };
    Lagrangian2 F{augmented};
    auto path = [&](double s, double args[4]) {
        args[0] = y1(params.jump(s));
        args[1] = y2(params.jump(s));
        args[2] = hahn_derivative(params, y1, s);
        args[3] = hahn_derivative(params, y2, s);
    };
    NonholonomicResidual res;
    for (int comp = 0; comp < 2; ++comp) {
        RealFunction momentum = make_function(
            [&, comp](double s) {
                double a[4];
                path(s, a);
                return F.partial(3 + comp, s, a[0], a[1], a[2], a[3]);
            },
            "d(v_i)F along path");
        double a[4];
        path(t, a);
        const double dp = hahn_derivative(params, momentum, t);
        const double du = F.partial(1 + comp, t, a[0], a[1], a[2], a[3]);
        (comp == 0 ? res.component1 : res.component2) = dp - du;
    }
    double a[4];
    path(t, a);
    res.constraint_violation = g_constraint(t, a[0], a[1], a[2], a[3]);
    return res;
}

ConvexityReport check_joint_convexity(const Lagrangian& lagrangian,
                                      std::span<const double> t_set, int sample_count,
                                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> box(-5.0, 5.0);
    ConvexityReport report;
    report.worst_margin = std::numeric_limits<double>::infinity();
    double scale = 1.0;
    for (double t : t_set) {
        for (int s = 0; s < sample_count; ++s) {
            const double u = box(rng), v = box(rng);
            const double u1 = box(rng), v1 = box(rng);
            const double lhs = lagrangian(t, u + u1, v + v1) - lagrangian(t, u, v);
            const double rhs = lagrangian.du(t, u, v) * u1 + lagrangian.dv(t, u, v) * v1;
            scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
            report.worst_margin = std::min(report.worst_margin, lhs - rhs);
            ++report.samples;
        }
    }
    report.passed = report.worst_margin >= -1e-9 * scale;
    return report;
}

}  // namespace hahn
