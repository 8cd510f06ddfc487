#include <doctest.h>

#include <cmath>

#include "bsdelab/step_approx.hpp"

using namespace bsdelab;

TEST_CASE("a step-path target is returned unchanged with zero error") {
    StepPath s = StepPath::scalar(0.25, 1.0, {{0.5, 0.75}});
    StepApproxResult r = l2_step_approximation(s, FiniteMeasure::lebesgue(1.0), 0.5);
    CHECK(r.error_sq == 0.0);
    CHECK(r.approx.same_values(s, 1.0));
}

TEST_CASE("identity target against Lebesgue refines to the predicted mesh") {
    PwlPath identity({{0.0, 0.0}, {1.0, 1.0}});
    StepApproxResult r = l2_step_approximation(identity, FiniteMeasure::lebesgue(1.0), 0.01);
    // best-midpoint cell error is h^2/12 per unit mass: h <= 0.0346 required
    double h = 1.0 / (1 << r.level);
    CHECK(h <= 0.0346);
    CHECK(r.error_sq < 1e-4);
    // independent error recomputation by Riemann refinement
    double err = 0;
    int n = 200000;
    for (int i = 0; i < n; ++i) {
        double x = (i + 0.5) / n;
        double d = x - r.approx.at1(x);
        err += d * d / n;
    }
    CHECK(err == doctest::Approx(r.error_sq).epsilon(1e-3).scale(1e-6));
}

TEST_CASE("single atom: the approximation nails the target value at the atom") {
    PwlPath identity({{0.0, 0.0}, {1.0, 1.0}});
    FiniteMeasure atom = FiniteMeasure::atomic({{0.5, 1.0}});
    StepApproxResult r = l2_step_approximation(identity, atom, 1e-6);
    CHECK(std::fabs(r.approx.at1(0.5) - 0.5) < 1e-3);  // dyadic rounding only
    CHECK(r.error_sq < 1e-12);
}

TEST_CASE("error budget is respected for mixed measures") {
    PwlPath bump({{0.0, 0.0}, {0.3, 2.0}, {0.6, -1.0}, {1.0, 0.5}});
    FiniteMeasure m = FiniteMeasure::mixed({{0.25, 0.4}, {0.8, 0.2}}, {{0.0, 0.0}, {1.0, 0.7}});
    for (double eps : {0.3, 0.05, 0.01}) {
        StepApproxResult r = l2_step_approximation(bump, m, eps);
        CHECK(r.error_sq < eps * eps);
    }
    CHECK_THROWS(l2_step_approximation(bump, m, 0.0));
}
