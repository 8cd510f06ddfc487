#include <doctest.h>

#include <cmath>
#include <vector>

#include "bsdelab/contraction.hpp"

using namespace bsdelab;

TEST_CASE("pi_star and pi_tilde_star closed forms") {
    // 8/1 + 9/2 + 9*2*e^0/(1*(2-1)) = 8 + 4.5 + 18 = 30.5
    CHECK(pi_star(1, 2, 0) == doctest::Approx(30.5).epsilon(1e-15));
    CHECK(pi_tilde_star(2, 0) == doctest::Approx(26.0).epsilon(1e-15));
    CHECK(pi_tilde_star(1, 1) == doctest::Approx(17 + 9 * std::exp(1.0)));
    CHECK_THROWS(pi_star(2, 1, 0));   // needs gamma < delta
    CHECK_THROWS(pi_star(-1, 2, 0));  // positivity
}

TEST_CASE("m_star(300, 0) beats the quarter threshold and the witness") {
    MStarResult m = m_star(300, 0);
    CHECK(m.value < 0.25);
    CHECK(m.value <= 0.2034);  // witness gamma = 150: 8/150 + 9/300 + 9/150 = 61/300
    CHECK(m.value <= 61.0 / 300 + 1e-12);
    CHECK(m.gamma > 0);
    CHECK(m.gamma < 300);
    CHECK(m.delta_boundary_optimal);
    // self-consistency: the reported minimizer reproduces the value
    CHECK(pi_star(m.gamma, 300, 0) == doctest::Approx(m.value).epsilon(1e-12));
}

TEST_CASE("m_star agrees with a 1e4-point grid oracle") {
    for (double beta : {120.0, 300.0, 800.0}) {
        for (double phi : {0.0, 1e-3, 0.05}) {
            double grid_best = 1e300;
            for (int i = 1; i < 10000; ++i) {
                double gamma = beta * i / 10000.0;
                if (gamma >= beta) continue;
                grid_best = std::min(grid_best, pi_star(gamma, beta, phi));
            }
            double v = m_star(beta, phi).value;
            CHECK(v <= grid_best + 1e-12);
            CHECK(std::fabs(v - grid_best) < 1e-4);
        }
    }
}

TEST_CASE("m_star grows with phi") {
    double prev = 0;
    for (double phi : {0.0, 0.01, 0.05, 0.2}) {
        double v = m_star(300, phi).value;
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("certificate json round trip and quarter test") {
    ContractionCertificate c = make_certificate(300, 0);
    CHECK(c.beta_hat == 300);
    CHECK(c.passes_quarter);
    ContractionCertificate back = ContractionCertificate::from_json(c.to_json());
    CHECK(back.beta_hat == c.beta_hat);
    CHECK(back.phi == c.phi);
    CHECK(back.gamma == c.gamma);
    CHECK(back.m_star == c.m_star);
    CHECK(back.passes_quarter == c.passes_quarter);

    ContractionCertificate weak = make_certificate(30, 0);  // m_star(30,0) > 1/4
    CHECK_FALSE(weak.passes_quarter);
}

TEST_CASE("select_k_star on a vanishing Phi sequence") {
    std::vector<double> phis;
    for (int k = 1; k <= 600; ++k) phis.push_back(1.0 / k);
    KStarResult r = select_k_star(phis, 300);
    CHECK(r.index >= 0);
    CHECK(r.index < 600);
    CHECK(r.certificates[r.index].passes_quarter);
    if (r.index > 0) CHECK_FALSE(r.certificates[r.index - 1].passes_quarter);

    CHECK_THROWS(select_k_star({10.0, 9.0}, 300));  // nothing qualifies
}

TEST_CASE("tail and first-iterate bounds") {
    CHECK(picard_tail_bound(2.0, 1) == doctest::Approx(2.0));
    CHECK(picard_tail_bound(2.0, 3) == doctest::Approx(2.0 / 16));
    CHECK_THROWS(picard_tail_bound(1.0, 0));
    double b = first_iterate_bound(300, 0, 1.5, 0.0);
    CHECK(b == doctest::Approx(pi_tilde_star(300, 0) * 1.5));
    double b2 = first_iterate_bound(300, 0, 1.0, 2.0);
    CHECK(b2 == doctest::Approx(pi_tilde_star(300, 0) + m_star(300, 0).value * 2.0));
}
