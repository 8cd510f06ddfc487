#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bsdelab/rng.hpp"
#include "bsdelab/standard_data.hpp"

using namespace bsdelab;

namespace {

StandardData walk(int k, double lambda, const GeneratorSpec& gen, const TerminalMap& g,
                  std::vector<double> marks = {1.0}) {
    MarkSpace ms;
    if (lambda > 0) ms.marks = std::move(marks);
    return build_random_walk_data(k, 1.0, gen, g, lambda, ms);
}

}  // namespace

TEST_CASE("tree structural validation") {
    ScenarioTree t;
    t.times = {0.0, 1.0};
    t.nodes.resize(3);
    t.nodes[0].level = 0;
    t.nodes[0].parent = -1;
    t.nodes[0].edges = {{1, 0.5, 1.0, -1}, {2, 0.5, -1.0, -1}};
    t.nodes[1].level = 1;
    t.nodes[1].parent = 0;
    t.nodes[1].parent_edge = 0;
    t.nodes[2].level = 1;
    t.nodes[2].parent = 0;
    t.nodes[2].parent_edge = 1;
    t.leaves = {1, 2};
    t.finalize();
    CHECK(t.nodes[1].path_prob == doctest::Approx(0.5));

    ScenarioTree bad = t;
    bad.nodes[0].edges[0].prob = 0.7;  // no longer sums to 1
    CHECK_THROWS(bad.finalize());
}

TEST_CASE("random-walk data: probabilities, drivers, characteristics") {
    StandardData d = walk(4, 1.0, make_generator("zero"),
                          [](const PathView& p) { return p.xo_terminal(); });
    CHECK(d.tree.levels() == 4);
    CHECK(d.dC.size() == 4);
    for (double c : d.dC) CHECK(c == doctest::Approx(0.25));

    // drivers are martingales: E[dXo | node] = 0, E[dXnat | node] = 0
    for (std::size_t v = 0; v < d.tree.nodes.size(); ++v) {
        const TreeNode& nd = d.tree.nodes[v];
        if (nd.edges.empty()) continue;
        double exo = 0, exn = 0;
        for (const Edge& e : nd.edges) {
            exo += e.prob * e.dxo;
            exn += e.prob * (d.xnat[e.child] - d.xnat[v]);
        }
        CHECK(std::fabs(exo) < 1e-12);
        CHECK(std::fabs(exn) < 1e-12);
    }

    // leaf probabilities sum to one
    double tot = 0;
    for (int leaf : d.tree.leaves) tot += d.tree.nodes[leaf].path_prob;
    CHECK(tot == doctest::Approx(1.0));

    // per-node jump kernel mass: lambda T / k per mark
    for (std::size_t v = 0; v < d.tree.nodes.size(); ++v) {
        if (d.tree.nodes[v].edges.empty()) continue;
        CHECK(d.jump_prob[v][0] == doctest::Approx(0.25));
    }

    auto chars = predictable_brackets(d);
    for (std::size_t v = 0; v < d.tree.nodes.size(); ++v) {
        if (d.tree.nodes[v].edges.empty()) continue;
        CHECK(chars[v].d_angle_xo == doctest::Approx(0.25));  // (sqrt(T/k))^2
        CHECK(chars[v].zeta_nat == doctest::Approx(0.25));
        CHECK(chars[v].dC == doctest::Approx(0.25));
    }
}

TEST_CASE("exact-tree guard rejects oversized trees") {
    CHECK_THROWS_AS(walk(24, 0.0, make_generator("zero"),
                         [](const PathView& p) { return p.xo_terminal(); }),
                    std::invalid_argument);
}

TEST_CASE("tnorm worked value and brute-force cross-check") {
    // lambda = 1, k = 4, U == 1: tnorm^2 * dC summed over the 4 steps = lambda (1 - lambda/k)
    StandardData d = walk(4, 1.0, make_generator("zero"),
                          [](const PathView& p) { return p.xnat_terminal(); });
    std::vector<double> U(1, 1.0);
    double total = 0;
    // tnorm is a per-node quantity; accumulate one step per level along any path
    int v = 0;
    while (!d.tree.nodes[v].edges.empty()) {
        total += tnorm_sq(d, v, U) * d.dC_at(v);
        v = d.tree.nodes[v].edges[0].child;
    }
    CHECK(total == doctest::Approx(0.75).epsilon(1e-12));

    // brute force: conditional variance of U(mark)-compensator increment
    SplitMix64 rng(13);
    for (int it = 0; it < 50; ++it) {
        std::vector<double> u{2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
        StandardData e = walk(3, 0.4 + rng.uniform(), make_generator("zero"),
                              [](const PathView& p) { return p.xnat_terminal(); },
                              {0.7, -1.3});
        int node = 0;
        const auto& w = e.jump_prob[node];
        double nuhat = 0;
        for (std::size_t j = 0; j < w.size(); ++j) nuhat += w[j] * u[j];
        double var = 0;
        for (const Edge& ed : e.tree.nodes[node].edges) {
            double val = (ed.mark >= 0 ? u[ed.mark] : 0.0) - nuhat;
            var += ed.prob * val * val;
        }
        CHECK(tnorm_sq(e, node, u) * e.dC_at(node) == doctest::Approx(var).epsilon(1e-12));
    }
}

TEST_CASE("jump_linear generator gets its theta_nat from the instance") {
    GeneratorSpec g = make_generator("jump_linear", 0.5);
    StandardData d = walk(4, 1.0, g, [](const PathView& p) { return p.xnat_terminal(); });
    CHECK(d.gen.theta_nat > 0);
    CHECK(d.alpha == doctest::Approx(d.gen.alpha()));
}

TEST_CASE("deterministic chain data") {
    StandardData d = build_deterministic_data(4, 1.0, make_generator("linear_y", 0.5), 2.0);
    CHECK(d.tree.leaves.size() == 1);
    CHECK(d.xi[0] == 2.0);
    CHECK(d.alpha == doctest::Approx(0.5));
    CHECK(d.cumA.back() == doctest::Approx(0.25));  // alpha^2 * C_T
    CHECK(d.phi == doctest::Approx(0.25 * 0.25));
}

TEST_CASE("standard-data conditions report") {
    StandardData d = walk(4, 0.5, make_generator("linear_y", 0.5),
                          [](const PathView& p) { return p.xo_terminal(); });
    ConditionReport r = validate_conditions(d, 10.0, 4.0);
    CHECK(r.all_pass);
    CHECK(r.item("A_T_bounded").pass);
    CHECK(r.item("probability_sums").pass);
    CHECK(r.item("driver_martingale").pass);
    CHECK(r.item("zeta_le_one").pass);

    // an absurd weight exponent breaks representability
    ConditionReport bad = validate_conditions(d, 10.0, 1e7);
    CHECK_FALSE(bad.item("beta_weight_representable").pass);
    CHECK_FALSE(bad.all_pass);

    // declared A-bar below the realized A_T
    ConditionReport tight = validate_conditions(d, 1e-6, 4.0);
    CHECK_FALSE(tight.item("A_T_bounded").pass);

    std::vector<StandardData> seq;
    for (int k : {2, 4, 8}) seq.push_back(walk(k, 0.5, make_generator("linear_y", 0.5),
                                               [](const PathView& p) { return p.xo_terminal(); }));
    ConditionReport sr = validate_conditions(seq, 10.0, 4.0);
    CHECK(sr.all_pass);
    CHECK(sr.item("xi_moment_sup").pass);
}

TEST_CASE("standard-data json round trip") {
    StandardData d = walk(3, 0.5, make_generator("linear_y", 0.5),
                          [](const PathView& p) { return p.xo_terminal(); });
    StandardData back = StandardData::from_json(d.to_json());
    CHECK(back.tree.nodes.size() == d.tree.nodes.size());
    CHECK(back.T == d.T);
    CHECK(back.xi == d.xi);
    CHECK(back.xo == d.xo);
    CHECK(back.xnat == d.xnat);
    CHECK(back.dC == d.dC);
    CHECK(back.alpha == doctest::Approx(d.alpha));
    CHECK(back.gen.name == d.gen.name);
    REQUIRE(back.tree.nodes.size() == d.tree.nodes.size());
    for (std::size_t v = 0; v < d.tree.nodes.size(); ++v) {
        CHECK(back.tree.nodes[v].level == d.tree.nodes[v].level);
        CHECK(back.tree.nodes[v].edges.size() == d.tree.nodes[v].edges.size());
    }
}
