#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bsdelab/rng.hpp"
#include "bsdelab/solver.hpp"

using namespace bsdelab;

namespace {

StandardData walk(int k, double lambda, const GeneratorSpec& gen, const TerminalMap& g,
                  std::vector<double> marks = {1.0}) {
    MarkSpace ms;
    if (lambda > 0) ms.marks = std::move(marks);
    return build_random_walk_data(k, 1.0, gen, g, lambda, ms);
}

StandardData random_instance(SplitMix64& rng) {
    int k = 2 + static_cast<int>(rng.uniform() * 4);  // depth <= 5
    double lambda = rng.uniform() < 0.5 ? 0.0 : 0.3 + rng.uniform() * 0.8;
    int pick = static_cast<int>(rng.uniform() * 3);
    GeneratorSpec gen = pick == 0   ? make_generator("zero")
                        : pick == 1 ? make_generator("linear_y", 0.5 * rng.uniform())
                                    : make_generator("call", 0.5 * rng.uniform(), 0.3);
    double w1 = 0.5 + rng.uniform(), w2 = 0.2 + rng.uniform();
    TerminalMap g = [w1, w2](const PathView& p) {
        return w1 * p.xo_terminal() + w2 * std::max(p.xnat_terminal(), 0.0);
    };
    std::vector<double> marks = lambda > 0 && rng.uniform() < 0.5
                                    ? std::vector<double>{1.0}
                                    : std::vector<double>{0.8, -1.4};
    MarkSpace ms;
    if (lambda > 0) ms.marks = marks;
    return build_random_walk_data(k, 1.0, gen, g, lambda, ms);
}

/// Independent reconstruction check: Y_t + L_t = Y_0 + sum of martingale
/// increments along every path.
double reconstruction_residual(const StandardData& d, const PicardSolution& S,
                               Convention conv = Convention::Y_left) {
    std::vector<double> L = lebesgue_integral_L(d, S, conv);
    double worst = 0;
    for (std::size_t v = 0; v < d.tree.nodes.size(); ++v) {
        double acc = 0;
        for (int u = static_cast<int>(v); d.tree.nodes[u].parent >= 0; u = d.tree.nodes[u].parent)
            acc += m2_increment(S, d, u) + S.dN[u];
        double lhs = S.Y[v] + L[v];
        double rhs = S.Y[0] + acc;
        worst = std::max(worst, std::fabs(lhs - rhs));
    }
    return worst;
}

}  // namespace

TEST_CASE("backward_project basics") {
    ScenarioTree t;
    t.times = {0.0, 1.0};
    t.nodes.resize(3);
    t.nodes[0].edges = {{1, 0.5, 0.5, -1}, {2, 0.5, -0.5, -1}};
    t.nodes[1] = {1, 0, 0, {}, 0};
    t.nodes[2] = {1, 0, 1, {}, 0};
    t.finalize();
    auto v = backward_project(t, {2.0, 0.0});
    CHECK(v[0] == doctest::Approx(1.0));

    auto ind = backward_project(t, {1.0, 0.0});
    CHECK(ind[0] == doctest::Approx(0.5));

    StandardData d = walk(2, 0.0, make_generator("zero"),
                          [](const PathView& p) { return p.xo_terminal() * p.xo_terminal(); });
    auto root = backward_project(d.tree, d.xi);
    CHECK(root[0] == doctest::Approx(1.0));  // Var(X_T) = T = 1
}

TEST_CASE("gkw_decompose worked cases") {
    // comonotone one-step: dM = +-1, dXo = +-1/2 -> Z = 2, N = 0
    ScenarioTree t;
    t.times = {0.0, 1.0};
    t.nodes.resize(3);
    t.nodes[0].edges = {{1, 0.5, 0.5, -1}, {2, 0.5, -0.5, -1}};
    t.nodes[1] = {1, 0, 0, {}, 0};
    t.nodes[2] = {1, 0, 1, {}, 0};
    t.finalize();
    StandardData d;
    d.tree = t;
    d.T = 1;
    d.dC = {1.0};
    d.jump_prob = {std::vector<double>{}, {}, {}};
    d.gen = make_generator("zero");
    d.xi = {1.0, -1.0};
    d.finalize();
    GkwResult g = gkw_decompose({0.0, 1.0, -1.0}, d);
    CHECK(g.Z[0] == doctest::Approx(2.0));
    CHECK(std::fabs(g.dN[1]) < 1e-12);
    CHECK(std::fabs(g.dN[2]) < 1e-12);
    CHECK(g.max_martingale_residual < 1e-12);

    // constant martingale -> everything zero
    GkwResult gc = gkw_decompose({3.0, 3.0, 3.0}, d);
    CHECK(gc.Z[0] == doctest::Approx(0.0));
    CHECK(std::fabs(gc.dN[1]) < 1e-15);

    // pure-jump step: mark {1} with probability 1/4, dM = 1_{jump} - 1/4
    StandardData j = walk(1, 0.25, make_generator("zero"),
                          [](const PathView& p) { return p.xnat_terminal(); });
    // M = E[xi | node]
    auto M = backward_project(j.tree, j.xi);
    GkwResult gj = gkw_decompose(M, j);
    CHECK(gj.U[0][0] == doctest::Approx(1.0));
    CHECK(std::fabs(gj.Z[0]) < 1e-12);
    CHECK(gj.max_orthogonality_residual < 1e-10);
}

TEST_CASE("lebesgue_integral_L worked cases") {
    StandardData d = build_deterministic_data(4, 1.0, make_generator("constant", 1.0), 0.0);
    PicardSolution S = PicardSolution::zero(d);
    auto L = lebesgue_integral_L(d, S);
    CHECK(L[d.tree.leaves[0]] == doctest::Approx(1.0));  // f == 1, C_T = 1

    StandardData d2 = build_deterministic_data(4, 1.0, make_generator("linear_y", 0.5), 0.0);
    PicardSolution S2 = PicardSolution::zero(d2);
    for (auto& y : S2.Y) y = 1.0;
    auto L2 = lebesgue_integral_L(d2, S2);
    CHECK(L2[d2.tree.leaves[0]] == doctest::Approx(0.5));

    StandardData d3 = build_deterministic_data(4, 1.0, make_generator("zero"), 0.0);
    auto L3 = lebesgue_integral_L(d3, PicardSolution::zero(d3));
    for (double v : L3) CHECK(v == 0.0);
}

TEST_CASE("picard_step hand recursion, deterministic f(y) = 0.5 y") {
    StandardData d = build_deterministic_data(2, 1.0, make_generator("linear_y", 0.5), 1.0);
    PicardSolution S0 = PicardSolution::zero(d);
    PicardSolution S1 = picard_step(d, S0);
    CHECK(S1.Y[0] == doctest::Approx(1.0));  // f(0) = 0
    CHECK(S1.Y[1] == doctest::Approx(1.0));
    CHECK(S1.Y[2] == doctest::Approx(1.0));
    PicardSolution S2 = picard_step(d, S1);
    CHECK(S2.Y[0] == doctest::Approx(1.5));
    CHECK(S2.Y[1] == doctest::Approx(1.25));
    CHECK(S2.Y[2] == doctest::Approx(1.0));
}

TEST_CASE("solve reaches the implicit fixed point") {
    StandardData d = build_deterministic_data(2, 1.0, make_generator("linear_y", 0.5), 1.0);
    SolveResult r = solve(d, nullptr, {});
    CHECK(r.converged);
    CHECK(r.S.Y[0] == doctest::Approx(16.0 / 9).epsilon(1e-10));
    CHECK(r.S.Y[1] == doctest::Approx(4.0 / 3).epsilon(1e-10));
    CHECK(r.S.Y[2] == doctest::Approx(1.0));

    // f == 0 converges in one productive step
    StandardData d0 = walk(3, 0.0, make_generator("zero"),
                           [](const PathView& p) { return p.xo_terminal(); });
    SolveResult r0 = solve(d0, nullptr, {});
    CHECK(r0.converged);
    CHECK(r0.iterations <= 2);
    CHECK(std::fabs(r0.S.Y[0]) < 1e-12);  // odd symmetry

    // random walk with f(y) = 0.5y and odd terminal value keeps Y0 = 0
    StandardData dr = walk(4, 0.0, make_generator("linear_y", 0.5),
                           [](const PathView& p) { return p.xo_terminal(); });
    SolveResult rr = solve(dr, nullptr, {});
    CHECK(rr.converged);
    CHECK(std::fabs(rr.S.Y[0]) < 1e-9);
    double zmax = 0;
    for (double z : rr.S.Z) zmax = std::max(zmax, std::fabs(z));
    CHECK(zmax > 0.1);  // Z nontrivial

    // fixed point with n = 100 approximates e^{lambda T}
    StandardData dn = build_deterministic_data(100, 1.0, make_generator("linear_y", 0.5), 1.0);
    SolveResult rn = solve(dn, nullptr, {});
    // the discrete fixed point is (1 - lambda T / n)^{-n}; its gap to
    // e^{lambda T} is e^{lambda T} (lambda T)^2 / (2n) + O(n^-2) ~ 2.07e-3
    CHECK(rn.S.Y[0] == doctest::Approx(std::pow(1.0 - 0.005, -100)).epsilon(1e-10));
    CHECK(std::fabs(rn.S.Y[0] - std::exp(0.5)) < 2.5e-3);
    CHECK(std::fabs(rn.S.Y[0] - std::exp(0.5)) > 1.5e-3);
}

TEST_CASE("star_norm worked values") {
    StandardData d = build_deterministic_data(2, 1.0, make_generator("linear_y", 0.5), 1.0);
    CHECK(star_norm(PicardSolution::zero(d), d, 0.0).total() == doctest::Approx(0.0));
    SolveResult r = solve(d, nullptr, {});
    StarNorms n = star_norm(r.S, d, 0.0);
    CHECK(n.y_part == doctest::Approx(256.0 / 81).epsilon(1e-9));

    StandardData d2 = walk(2, 0.0, make_generator("zero"),
                           [](const PathView& p) { return p.xo_terminal(); });
    SolveResult r2 = solve(d2, nullptr, {});
    StarNorms n2 = star_norm(r2.S, d2, 0.0);
    CHECK(n2.z_part == doctest::Approx(1.0).epsilon(1e-10));  // Z == 1, <Xo>_T = 1
}

TEST_CASE("gamma_functional worked values") {
    StandardData d0 = build_deterministic_data(3, 1.0, make_generator("zero"), 1.0);
    SolveResult r0 = solve(d0, nullptr, {});
    GammaStats g0 = gamma_functional(d0, r0.S);
    CHECK(g0.mean == doctest::Approx(0.0));

    StandardData dc = build_deterministic_data(4, 1.0, make_generator("constant", 0.7, 0.35), 0.0);
    SolveResult rc = solve(dc, nullptr, {});
    GammaStats gc = gamma_functional(dc, rc.S);
    CHECK(gc.mean == doctest::Approx((0.7 / 0.35) * (0.7 / 0.35)));

    StandardData d = build_deterministic_data(2, 1.0, make_generator("linear_y", 0.5), 1.0);
    SolveResult r = solve(d, nullptr, {});
    GammaStats g = gamma_functional(d, r.S);
    double expect = 0.5 * (std::pow(16.0 / 9, 2) + std::pow(4.0 / 3, 2));
    CHECK(g.mean == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("brackets worked values") {
    StandardData d = walk(2, 0.0, make_generator("zero"),
                          [](const PathView& p) { return p.xo_terminal(); });
    SolveResult r = solve(d, nullptr, {});
    BracketSet b = brackets(r.S, d);
    for (int leaf : d.tree.leaves) {
        CHECK(b.square[0][leaf] == doctest::Approx(1.0));  // [Y]_T pathwise
        CHECK(b.angle[0][leaf] == doctest::Approx(1.0));
        CHECK(b.square[3][leaf] == doctest::Approx(1.0));  // [Y, Xo]_T
    }

    // compensated Bernoulli: U == 1 gives <U * mu~>_T = lambda (1 - lambda/k)
    StandardData j = walk(4, 1.0, make_generator("zero"),
                          [](const PathView& p) { return p.xnat_terminal(); });
    PicardSolution SU = PicardSolution::zero(j);
    for (auto& u : SU.U) u.assign(1, 1.0);
    BracketSet bj = brackets(SU, j);
    for (int leaf : j.tree.leaves) CHECK(bj.angle[2][leaf] == doctest::Approx(0.75));
}

TEST_CASE("orthogonality, Pythagoras, reconstruction on randomized instances") {
    SplitMix64 rng(101);
    for (int it = 0; it < 100; ++it) {
        StandardData d = random_instance(rng);
        SolveResult r = solve(d, nullptr, {});
        REQUIRE(r.converged);
        const PicardSolution& S = r.S;

        // Y at leaves equals xi when f == 0; in general the reconstruction
        // identity holds along every path
        CHECK(reconstruction_residual(d, S) < 1e-10);
        if (d.gen.is_zero())
            for (std::size_t i = 0; i < d.tree.leaves.size(); ++i)
                CHECK(std::fabs(S.Y[d.tree.leaves[i]] - d.xi[i]) < 1e-12);

        // per-node Pythagoras: E[(dM)^2] = Z^2 d<Xo> + tnorm^2 dC + E[(dN)^2]
        for (std::size_t v = 0; v < d.tree.nodes.size(); ++v) {
            const TreeNode& nd = d.tree.nodes[v];
            if (nd.edges.empty()) continue;
            double lhs = 0, dxo2 = 0, dn2 = 0;
            for (const Edge& e : nd.edges) {
                double dm = m2_increment(S, d, e.child) + S.dN[e.child];
                lhs += e.prob * dm * dm;
                dxo2 += e.prob * e.dxo * e.dxo;
                dn2 += e.prob * S.dN[e.child] * S.dN[e.child];
            }
            double rhs = S.Z[v] * S.Z[v] * dxo2 +
                         (d.n_marks() ? tnorm_sq(d, static_cast<int>(v), S.U[v]) * d.dC_at(v) : 0.0) +
                         dn2;
            CHECK(std::fabs(lhs - rhs) < 1e-10);
        }
    }
}

TEST_CASE("certified contraction: gap ratios and the geometric envelope") {
    StandardData d = build_deterministic_data(100, 1.0, make_generator("linear_y", 0.05), 1.0);
    ContractionCertificate cert = make_certificate(2000, d.phi);
    REQUIRE(cert.passes_quarter);
    SolveOptions opts;
    opts.beta = cert.beta_hat;
    opts.tol = 1e-13;
    SolveResult r = solve(d, &cert, opts, true);
    REQUIRE(r.converged);
    for (std::size_t p = 1; p < r.gap_sq.size(); ++p)
        if (r.gap_sq[p - 1] > 1e-24) CHECK(r.gap_sq[p] / r.gap_sq[p - 1] <= 0.5 + 1e-9);
    for (std::size_t p = 1; p <= r.iterates.size(); ++p) {
        double dist = star_norm(r.S.diff(r.iterates[p - 1]), d, cert.beta_hat).total();
        CHECK(dist <= picard_tail_bound(r.first_iterate_norm_sq, static_cast<int>(p)) + 1e-12);
    }
}

TEST_CASE("Y_left and Y_right conventions both converge and agree in the limit problem") {
    StandardData d = build_deterministic_data(50, 1.0, make_generator("linear_y", 0.5), 1.0);
    SolveOptions left, right;
    right.conv = Convention::Y_right;
    SolveResult rl = solve(d, nullptr, left);
    SolveResult rr = solve(d, nullptr, right);
    REQUIRE(rl.converged);
    REQUIRE(rr.converged);
    CHECK(rl.S.Y[0] != rr.S.Y[0]);  // finite-resolution sensitivity is visible
    CHECK(std::fabs(rl.S.Y[0] - rr.S.Y[0]) < 0.05);
    CHECK(reconstruction_residual(d, rr.S, Convention::Y_right) < 1e-10);
}

TEST_CASE("solution csv export shape") {
    StandardData d = walk(2, 0.5, make_generator("zero"),
                          [](const PathView& p) { return p.xnat_terminal(); });
    SolveResult r = solve(d, nullptr, {});
    std::string csv = solution_to_csv(r.S, d);
    CHECK(csv.find("node,level,Y,Z,U0,dN") == 0);
    std::size_t lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == d.tree.nodes.size() + 1);
}
