#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "hahn/errors.hpp"
#include "hahn/variational.hpp"

using namespace hahn;

namespace {

Lagrangian example1_lagrangian() {
    Lagrangian L;
    L.f = [](double, double u, double v) { return u + 0.5 * v * v; };
    L.d2 = [](double, double, double) { return 1.0; };
    L.d3 = [](double, double, double v) { return v; };
    return L;
}

RealFunction example1_solution(double q) {
    return make_function([q](double t) { return (t * t + q * t) / (q + 1.0); },
                         [q](double t) { return (2.0 * t + q) / (q + 1.0); },
                         "example1 extremal");
}

Lagrangian example2_lagrangian() {
    Lagrangian L;
    L.f = [](double t, double u, double v) { return v * v + u + t * v; };
    L.d2 = [](double, double, double) { return 1.0; };
    L.d3 = [](double t, double, double v) { return 2.0 * v + t; };
    return L;
}

}  // namespace

TEST_CASE("finite-difference partials match analytic ones") {
    Lagrangian analytic = example2_lagrangian();
    Lagrangian fd;
    fd.f = analytic.f;  // no d2/d3: forces central differences
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double t = d(rng), u = d(rng), v = d(rng);
        CHECK(fd.du(t, u, v) == doctest::Approx(analytic.du(t, u, v)).epsilon(1e-5));
        CHECK(fd.dv(t, u, v) == doctest::Approx(analytic.dv(t, u, v)).epsilon(1e-5));
    }
}

TEST_CASE("trajectory construction and lookup") {
    const QOmegaParams p(0.5, 0.1);
    QLattice lat = QLattice::build(p, 0.0, 1.0, 6);
    CHECK_THROWS_AS(LatticeTrajectory(lat, std::vector<double>{1.0}), ValidationError);

    const LatticeTrajectory traj =
        LatticeTrajectory::sample(lat, make_function([](double t) { return t * t; }));
    CHECK(traj.value_at(0.0) == 0.0);
    CHECK(traj.value_at(1.0) == 1.0);
    CHECK_THROWS_AS(traj.value_at(0.123456), MissingNeighbor);
}

TEST_CASE("lattice derivative basics") {
    const QOmegaParams p(0.5, 0.1);
    QLattice lat = QLattice::build(p, 0.0, 1.0, 30);

    const LatticeTrajectory c =
        LatticeTrajectory::sample(lat, make_function([](double) { return 3.0; }));
    const LatticeTrajectory lin =
        LatticeTrajectory::sample(lat, make_function([](double t) { return t; }));
    const LatticeTrajectory sq =
        LatticeTrajectory::sample(lat, make_function([](double t) { return t * t; }));

    CHECK(lattice_derivative(c, 0.6) == 0.0);
    CHECK(lattice_derivative(lin, 0.6) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(lattice_derivative(sq, 0.6) == doctest::Approx(1.0).epsilon(1e-12));

    // derivative at the fixed point: limit estimate close to 2 omega0
    const double w0 = p.omega0();
    CHECK(lattice_derivative(sq, w0) == doctest::Approx(2.0 * w0).epsilon(1e-5));

    // deepest point has no jump neighbour on the lattice
    QLattice shallow = QLattice::build(p, 0.0, 1.0, 4);
    const LatticeTrajectory straj =
        LatticeTrajectory::sample(shallow, make_function([](double t) { return t; }));
    const double tip = shallow.branch(0).back();
    CHECK_THROWS_AS(lattice_derivative(straj, tip), MissingNeighbor);
}

TEST_CASE("functional evaluation with boundary warning") {
    const QOmegaParams p(0.5, 0.25);
    VariationalProblem prob{example2_lagrangian(), 0.0, 1.0, 0.0, 1.0, p};

    Lagrangian zero;
    zero.f = [](double, double, double) { return 0.0; };
    VariationalProblem zprob{zero, 0.0, 1.0, 0.0, 1.0, p};
    CHECK(evaluate_functional(zprob, make_function([](double t) { return t * t; })) ==
          0.0);

    // frozen series oracle at the linear minimizer y(t) = t
    const RealFunction lin =
        make_function([](double t) { return t; }, [](double) { return 1.0; }, "t");
    std::string warning;
    const double value = evaluate_functional(prob, lin, {}, &warning);
    CHECK(value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(warning.empty());

    const RealFunction off = make_function([](double t) { return t + 0.1; }, "t+0.1");
    evaluate_functional(prob, off, {}, &warning);
    CHECK(!warning.empty());
}

TEST_CASE("truncated trajectory functional matches the series") {
    const QOmegaParams p(0.5, 0.25);
    VariationalProblem prob{example2_lagrangian(), 0.0, 1.0, 0.0, 1.0, p};
    const RealFunction lin =
        make_function([](double t) { return t; }, [](double) { return 1.0; }, "t");
    QLattice lat = QLattice::build(p, 0.0, 1.0, 45);
    const LatticeTrajectory traj = LatticeTrajectory::sample(lat, lin);
    std::string warning;
    CHECK(evaluate_functional(prob, traj, &warning) ==
          doctest::Approx(2.0).epsilon(1e-11));
    CHECK(warning.empty());
}

TEST_CASE("Euler-Lagrange residual of the known extremals") {
    Lagrangian zero;
    zero.f = [](double, double, double) { return 0.0; };
    zero.d2 = [](double, double, double) { return 0.0; };
    zero.d3 = [](double, double, double) { return 0.0; };

    for (auto [q, w] : {std::pair{0.5, 0.1}, std::pair{0.9, 0.05}}) {
        const QOmegaParams p(q, w);
        VariationalProblem zprob{zero, 0.0, 1.0, 0.0, 1.0, p};
        VariationalProblem prob{example1_lagrangian(), 0.0, 1.0, 0.0, 1.0, p};
        const RealFunction y = example1_solution(q);
        const int depth = q < 0.8 ? 8 : 25;
        QLattice lat = QLattice::build(p, 0.0, 1.0, depth);
        for (double t : lat.points()) {
            CHECK(el_residual(zprob, y, t) == 0.0);
            CHECK(std::abs(el_residual(prob, y, t)) < 1e-10);
        }
    }

    // any affine function annihilates the example2 operator
    const QOmegaParams p(0.5, 0.25);
    VariationalProblem prob2{example2_lagrangian(), 0.0, 1.0, 0.0, 1.0, p};
    const RealFunction aff = make_function([](double t) { return 0.7 * t - 0.2; },
                                           [](double) { return 0.7; }, "affine");
    // depth 6: closer to omega0 the double difference quotient in the
    // residual loses accuracy as eps / gap^2
    QLattice lat = QLattice::build(p, 0.0, 1.0, 6);
    for (double t : lat.points()) {
        CHECK(std::abs(el_residual(prob2, aff, t)) < 1e-10);
    }
}

TEST_CASE("trajectory residual agrees at interior points") {
    const QOmegaParams p(0.5, 0.1);
    VariationalProblem prob{example1_lagrangian(), 0.0, 1.0, 0.0, 1.0, p};
    QLattice lat = QLattice::build(p, 0.0, 1.0, 20);
    const LatticeTrajectory traj =
        LatticeTrajectory::sample(lat, example1_solution(p.q()));
    int checked = 0;
    for (double t : lat.points()) {
        if (std::abs(t - p.omega0()) < 1e-2 && !p.at_fixed_point(t)) continue;
        double r;
        try {
            r = el_residual(prob, traj, t);
        } catch (const MissingNeighbor&) {
            continue;  // branch tip
        }
        CHECK(std::abs(r) < 1e-8);
        ++checked;
    }
    CHECK(checked > 5);
}

TEST_CASE("direct solve of the Dirichlet energy") {
    const QOmegaParams p(0.5, 0.25);
    Lagrangian dirichlet;
    dirichlet.f = [](double, double, double v) { return v * v; };
    dirichlet.d2 = [](double, double, double) { return 0.0; };
    dirichlet.d3 = [](double, double, double v) { return 2.0 * v; };
    VariationalProblem prob{dirichlet, 0.0, 1.0, 0.0, 1.0, p};

    const SolveResult sol = solve_direct(prob, 25);
    CHECK(sol.grad_norm < 1e-8);
    CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-6));
    const auto& lat = sol.trajectory.lattice();
    for (std::size_t i = 0; i < lat.points().size(); ++i) {
        CHECK(std::abs(sol.trajectory[i] - lat.points()[i]) < 1e-6);
    }
    // boundary pins
    CHECK(sol.trajectory.value_at(0.0) == 0.0);
    CHECK(sol.trajectory.value_at(1.0) == 1.0);

    // determinism: bit-identical second run
    const SolveResult again = solve_direct(prob, 25);
    CHECK(again.objective == sol.objective);
    CHECK(again.iterations == sol.iterations);
    for (std::size_t i = 0; i < lat.points().size(); ++i) {
        CHECK(again.trajectory[i] == sol.trajectory[i]);
    }

    SolveOptions strict;
    strict.max_iters = 1;
    strict.grad_tol = 1e-14;
    // the linear initial guess is not stationary for example1, so a single
    // iteration cannot certify the strict tolerance
    VariationalProblem prob1{example1_lagrangian(), 0.0, 1.0, 0.0, 1.0, p};
    CHECK_THROWS_AS(solve_direct(prob1, 25, strict), MaxIterations);
    CHECK_THROWS_AS(solve_direct(prob, 2), ValidationError);
}

TEST_CASE("direct solve recovers the quadratic extremal") {
    const QOmegaParams p(0.5, 0.1);
    VariationalProblem prob{example1_lagrangian(), 0.0, 1.0, 0.0, 1.0, p};
    const RealFunction y = example1_solution(p.q());

    const SolveResult sol = solve_direct(prob, 40);
    const auto& lat = sol.trajectory.lattice();
    for (std::size_t i = 0; i < lat.points().size(); ++i) {
        CHECK(std::abs(sol.trajectory[i] - y(lat.points()[i])) < 1e-6);
    }
    const double oracle = evaluate_functional(prob, y);
    CHECK(sol.objective == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("isoperimetric residual and multiplier recovery") {
    const QOmegaParams p(0.5, 0.25);
    Lagrangian f;
    f.f = [](double, double, double v) { return v * v; };
    f.d2 = [](double, double, double) { return 0.0; };
    f.d3 = [](double, double, double v) { return 2.0 * v; };
    Lagrangian g;
    g.f = [](double, double u, double) { return u; };
    g.d2 = [](double, double, double) { return 1.0; };
    g.d3 = [](double, double, double) { return 0.0; };

    // EL of F = f - lambda g: 2 DDy + lambda = 0; lambda = 2 gives DDy = -1
    const double q = p.q();
    const RealFunction y = make_function(
        [q](double t) { return -(t * t + q * t) / (q + 1.0) + 2.0 * t; },
        [q](double t) { return -(2.0 * t + q) / (q + 1.0) + 2.0; }, "constructed");
    VariationalProblem prob{f, 0.0, 1.0, y.eval(0.0), y.eval(1.0), p};
    RealFunction gpath = make_function([&p, &y](double t) { return y(p.jump(t)); });
    IsoperimetricConstraint constraint{g, qomega_integral(p, gpath, 0.0, 1.0).value};

    QLattice lat = QLattice::build(p, 0.0, 1.0, 6);
    std::vector<double> t_set;
    for (double t : lat.points()) t_set.push_back(t);

    for (double t : t_set) {
        CHECK(std::abs(isoperimetric_residual(prob, constraint, y, 2.0, 1.0, t)) < 1e-8);
        // lambda0 = 1, lambda = 0 reduces to the unconstrained residual
        CHECK(isoperimetric_residual(prob, constraint, y, 0.0, 1.0, t) ==
              doctest::Approx(el_residual(prob, y, t)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(isoperimetric_residual(prob, constraint, y, 0.0, 0.0, 0.25),
                    BothMultipliersZero);

    const MultiplierEstimate est = estimate_multiplier(prob, constraint, y, t_set);
    CHECK(est.lambda0 > 0.1);
    CHECK(est.lambda / est.lambda0 == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(est.residual_norm < 1e-8);

    // scale invariance of the recovered ratio
    auto scale_lagrangian = [](const Lagrangian& L, double c) {
        Lagrangian out;
        out.f = [L, c](double t, double u, double v) { return c * L(t, u, v); };
        out.d2 = [L, c](double t, double u, double v) { return c * L.du(t, u, v); };
        out.d3 = [L, c](double t, double u, double v) { return c * L.dv(t, u, v); };
        return out;
    };
    VariationalProblem sprob = prob;
    sprob.lagrangian = scale_lagrangian(f, 3.0);
    IsoperimetricConstraint scon{scale_lagrangian(g, 3.0), 3.0 * constraint.k};
    const MultiplierEstimate sest = estimate_multiplier(sprob, scon, y, t_set);
    CHECK(sest.lambda / sest.lambda0 ==
          doctest::Approx(est.lambda / est.lambda0).epsilon(1e-10));

    // abnormal probe: g2 = v has zero residual for every y
    Lagrangian g2;
    g2.f = [](double, double, double v) { return v; };
    g2.d2 = [](double, double, double) { return 0.0; };
    g2.d3 = [](double, double, double) { return 1.0; };
    IsoperimetricConstraint acon{g2, 0.0};
    const RealFunction ysq = make_function([](double t) { return t * t; },
                                           [](double t) { return 2.0 * t; }, "t^2");
    const MultiplierEstimate abn = estimate_multiplier(prob, acon, ysq, t_set);
    CHECK(std::abs(abn.lambda0) < 1e-10);

    // candidate unrelated to the problem: large residual norm
    const RealFunction bad = make_function([](double t) { return std::sin(5.0 * t); },
                                           [](double t) { return 5.0 * std::cos(5.0 * t); },
                                           "unrelated");
    const MultiplierEstimate rough = estimate_multiplier(prob, constraint, bad, t_set);
    CHECK(rough.residual_norm > 1e-2);

    // both residual vectors numerically zero
    VariationalProblem zprob = prob;
    Lagrangian zf;
    zf.f = [](double, double, double) { return 0.0; };
    zf.d2 = zf.d3 = [](double, double, double) { return 0.0; };
    zprob.lagrangian = zf;
    IsoperimetricConstraint zcon{zf, 0.0};
    CHECK_THROWS_AS(estimate_multiplier(zprob, zcon, y, t_set), DegenerateSystem);
}

TEST_CASE("nonholonomic residuals") {
    const QOmegaParams p(0.5, 0.25);
    Lagrangian2 f{[](double, double, double, double v1, double v2) {
        return v1 * v1 + v2 * v2;
    }};
    Lagrangian2 g{[](double, double, double, double v1, double v2) { return v1 - v2; }};
    Lagrangian2 gzero{[](double, double, double, double, double) { return 0.0; }};
    const RealFunction lam0 = make_function([](double) { return 0.0; }, "0");

    VariationalProblem2 prob{f, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, p};
    const RealFunction y1 = make_function([](double t) { return 0.5 * t + 1.0; },
                                          [](double) { return 0.5; }, "y1");
    const RealFunction y2 = make_function([](double t) { return 0.5 * t - 2.0; },
                                          [](double) { return 0.5; }, "y2");

    const NonholonomicResidual r = nonholonomic_residual(prob, g, lam0, y1, y2, 0.25);
    CHECK(std::abs(r.component1) < 1e-8);
    CHECK(std::abs(r.component2) < 1e-8);
    CHECK(std::abs(r.constraint_violation) < 1e-12);

    // with g == 0 the residuals reduce to the unconstrained ones
    const NonholonomicResidual ru =
        nonholonomic_residual(prob, gzero, lam0, y1, y2, 0.25);
    CHECK(r.component1 == doctest::Approx(ru.component1).epsilon(1e-10));

    // perturbing y2 breaks the constraint
    const RealFunction y2b = make_function([](double t) { return 0.7 * t; },
                                           [](double) { return 0.7; }, "y2 perturbed");
    const NonholonomicResidual rb = nonholonomic_residual(prob, g, lam0, y1, y2b, 0.25);
    CHECK(std::abs(rb.constraint_violation) > 1e-3);
}

TEST_CASE("joint convexity check") {
    const std::vector<double> t_set{0.1, 0.4, 0.8};

    CHECK(check_joint_convexity(example1_lagrangian(), t_set, 100).passed);
    CHECK(check_joint_convexity(example2_lagrangian(), t_set, 100).passed);

    Lagrangian concave;
    concave.f = [](double, double, double v) { return -v * v; };
    concave.d2 = [](double, double, double) { return 0.0; };
    concave.d3 = [](double, double, double v) { return -2.0 * v; };
    const ConvexityReport bad = check_joint_convexity(concave, t_set, 100);
    CHECK(!bad.passed);
    CHECK(bad.worst_margin < 0.0);
    CHECK(bad.samples == 300);
}

TEST_CASE("global minimality of the convex extremal under perturbations") {
    const QOmegaParams p(0.5, 0.1);
    VariationalProblem prob{example1_lagrangian(), 0.0, 1.0, 0.0, 1.0, p};
    const RealFunction y = example1_solution(p.q());
    const double base = evaluate_functional(prob, y);

    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double c1 = amp(rng), c2 = amp(rng);
        const RealFunction pert = make_function(
            [&y, c1, c2](double t) {
                return y(t) + t * (1.0 - t) * (c1 + c2 * t);
            },
            [&y, c1, c2](double t) {
                return y.classical_derivative(t) + c1 * (1.0 - 2.0 * t) +
                       c2 * (2.0 * t - 3.0 * t * t);
            },
            "perturbed");
        CHECK(evaluate_functional(prob, pert) >= base - 1e-9);
    }
}
