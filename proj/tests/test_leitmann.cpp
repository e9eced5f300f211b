#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "hahn/errors.hpp"
#include "hahn/leitmann.hpp"
#include "hahn/models.hpp"

using namespace hahn;

TEST_CASE("transformation round trip") {
    const QOmegaParams p(0.5, 0.25);
    const Fixture fx = fixture("example2", p);
    QLattice lat = QLattice::build(p, 0.0, 1.0, 10);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> wd(-10.0, 10.0);
    for (double t : lat.points()) {
        for (int i = 0; i < 5; ++i) {
            const double w = wd(rng);
            CHECK(fx.transform.inverse(t, fx.transform.forward(t, w)) ==
                  doctest::Approx(w).epsilon(1e-12));
        }
    }
}

TEST_CASE("trivial gauge identity") {
    const QOmegaParams p(0.5, 0.25);
    const Fixture fx = fixture("example2", p);
    const RealFunction ybar = make_function([](double t) { return 0.3 * t * t; },
                                            [](double t) { return 0.6 * t; }, "probe");
    const double defect =
        verify_gauge_identity(p, fx.problem.lagrangian, fx.problem.lagrangian,
                              Transformation::identity(), GaugeTerm::zero(), ybar, 0.25);
    CHECK(defect == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("gauge identity for the linear transformation") {
    const QOmegaParams p(0.5, 0.25);
    const Fixture fx = fixture("example2", p);
    QLattice lat = QLattice::build(p, 0.0, 1.0, 10);
    std::vector<RealFunction> probes;
    probes.push_back(make_function([](double) { return 0.0; },
                                   [](double) { return 0.0; }, "0"));
    probes.push_back(make_function([](double t) { return t * (1.0 - t); },
                                   [](double t) { return 1.0 - 2.0 * t; }, "bump"));
    probes.push_back(make_function([](double t) { return std::cos(t); },
                                   [](double t) { return -std::sin(t); }, "cos"));
    for (const RealFunction& ybar : probes) {
        for (double t : lat.points()) {
            if (p.at_fixed_point(t)) continue;
            const double defect = verify_gauge_identity(
                p, fx.problem.lagrangian, fx.fbar, fx.transform, fx.gauge, ybar, t);
            CHECK(std::abs(defect) < 1e-10);
        }
    }
}

TEST_CASE("gauge identity for the product-derivative problem") {
    const QOmegaParams p(0.5, 0.25);
    // alpha=2, beta=1 gives a nontrivial shift (At+B)/g
    const Fixture fx = fixture("example4", p, 0.0, 1.0, 2.0, 1.0);
    QLattice lat = QLattice::build(p, 0.0, 1.0, 10);
    const RealFunction g = builtin("leitmann_g");
    const RealFunction ybar = make_function(
        [g](double t) { return 1.0 / g(t); },
        [g](double t) {
            const double gv = g(t);
            return -g.classical_derivative(t) / (gv * gv);
        },
        "1/g");
    for (double t : lat.points()) {
        if (p.at_fixed_point(t)) continue;
        const double defect = verify_gauge_identity(
            p, fx.problem.lagrangian, fx.fbar, fx.transform, fx.gauge, ybar, t);
        CHECK(std::abs(defect) < 1e-9);
    }
}

TEST_CASE("gauge telescoping against the boundary difference") {
    const QOmegaParams p(0.5, 0.25);
    const Fixture fx = fixture("example2", p);
    const RealFunction ybar = make_function([](double t) { return t * t - 0.5 * t; },
                                            [](double t) { return 2.0 * t - 0.5; },
                                            "probe");
    RealFunction gauge_path = make_function(
        [&fx, &ybar](double t) { return fx.gauge.G(t, ybar(t)); }, "G along ybar");
    RealFunction dgauge = make_function(
        [&p, &gauge_path](double t) { return hahn_derivative(p, gauge_path, t); },
        "D G");
    const double integral = qomega_integral(p, dgauge, 0.0, 1.0).value;
    const double boundary = gauge_path(1.0) - gauge_path(0.0);
    CHECK(integral == doctest::Approx(boundary).epsilon(1e-9));
}

TEST_CASE("constant functional difference across admissible samples") {
    const QOmegaParams p(0.5, 0.25);
    const Fixture fx = fixture("example2", p);
    std::vector<RealFunction> samples;
    for (int i = 0; i < 5; ++i) {
        const double scale = 0.25 * i;
        samples.push_back(make_function(
            [&fx, scale](double t) {
                return fx.solution(t) + scale * t * (t - 0.0) * (t - 1.0);
            },
            "sample"));
    }
    const ConstantDifferenceReport rep =
        verify_constant_difference(p, fx.problem.lagrangian, fx.fbar, fx.transform,
                                   samples, 0.0, 1.0);
    REQUIRE(rep.differences.size() == 5);
    CHECK(rep.passed);
    CHECK(rep.spread < 1e-8);

    // identity transform with f == fbar: all differences vanish
    const ConstantDifferenceReport triv = verify_constant_difference(
        p, fx.problem.lagrangian, fx.problem.lagrangian, Transformation::identity(),
        samples, 0.0, 1.0);
    for (double d : triv.differences) CHECK(d == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("minimizer transfers through the transformation") {
    const QOmegaParams p(0.5, 0.25);
    const Fixture fx = fixture("example2", p);
    // Lbar is minimized by ybar == 0; its forward transform is fx.solution,
    // which must then minimize L over the same perturbation family.
    std::vector<RealFunction> samples;
    for (int i = 0; i < 5; ++i) {
        const double scale = 0.3 * i - 0.6;
        samples.push_back(make_function(
            [&fx, scale](double t) {
                return fx.solution(t) + scale * t * (t - 1.0);
            },
            "sample"));
    }
    std::size_t argmin_f = 0, argmin_fbar = 0;
    double best_f = 1e300, best_fbar = 1e300;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        VariationalProblem prob = fx.problem;
        const double lf = evaluate_functional(prob, samples[i]);
        RealFunction ybar = make_function(
            [&fx, &samples, i](double t) {
                return fx.transform.inverse(t, samples[i](t));
            },
            "ybar sample");
        VariationalProblem pbar = fx.problem;
        pbar.lagrangian = fx.fbar;
        const double lfbar = evaluate_functional(pbar, ybar);
        if (lf < best_f) {
            best_f = lf;
            argmin_f = i;
        }
        if (lfbar < best_fbar) {
            best_fbar = lfbar;
            argmin_fbar = i;
        }
    }
    CHECK(argmin_f == argmin_fbar);
    CHECK(argmin_f == 2);  // scale 0: the analytic minimizer itself
}

TEST_CASE("control invariance family") {
    const QOmegaParams p(0.5, 0.25);
    const Fixture fx = fixture("example3_control", p);

    for (double s : {0.0, -1.0, 0.7}) {
        const ControlInvarianceReport rep =
            verify_control_invariance(p, s, fx.control_optimum);
        CHECK(rep.shift_error < 1e-8);
        CHECK(rep.covariance_error < 1e-10);
        CHECK(std::abs(rep.null_value) < 1e-10);
        CHECK(rep.null_boundary_error < 1e-10);
        CHECK(rep.optimum_value == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(rep.passed);
    }

    // out-of-bounds controls are rejected
    ControlTrajectories bad = fx.control_optimum;
    bad.u2 = make_function([](double) { return 1.5; }, "u2 = 1.5");
    CHECK_THROWS_AS(verify_control_invariance(p, 0.0, bad), ConstraintViolation);
}
