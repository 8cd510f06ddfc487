#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bsdelab/generators.hpp"
#include "bsdelab/tree.hpp"

namespace bsdelab {

struct MarkSpace {
    std::vector<double> marks;  // distinct, nonzero
    void validate() const;
};

/// One scenario read off a tree: node indices from root to leaf with the
/// driver values along the way.
struct PathView {
    std::vector<int> nodes;
    std::vector<double> times;
    std::vector<double> xo;
    std::vector<double> xnat;

    double xo_terminal() const { return xo.back(); }
    double xnat_terminal() const { return xnat.back(); }
};

using TerminalMap = std::function<double(const PathView&)>;

/// Standard data tuple D^k: tree, horizon, drivers, integrator C, terminal
/// value, generator, and the derived characteristics (alpha, A, Phi).
struct StandardData {
    ScenarioTree tree;
    double T = 1;
    MarkSpace marks;
    std::vector<double> dC;                       // per level step
    std::vector<std::vector<double>> jump_prob;   // per node: nu atom masses per mark
    GeneratorSpec gen;
    std::vector<double> xi;    // per leaf, aligned with tree.leaves
    std::vector<double> xo;    // per node
    std::vector<double> xnat;  // per node
    double phi_declared = -1;  // -1: use the computed max dA
    double A_bar = 1e9;

    // derived, filled by finalize()
    double alpha = 0;
    std::vector<double> cumC;  // C at t_0..t_n
    std::vector<double> cumA;  // A at t_0..t_n
    double phi = 0;            // max dA

    /// Compute driver paths, derived characteristics, and validate.
    void finalize();

    PathView leaf_path(int leaf) const;
    double compensator_drift(int node) const;  // sum_j x_j w_j at the node
    int node_level(int v) const { return tree.nodes[v].level; }
    double dC_at(int node) const { return dC[tree.nodes[node].level]; }
    std::size_t n_marks() const { return marks.marks.size(); }

    std::string to_json() const;
    static StandardData from_json(const std::string& text);
};

/// Binary-times-(marks+1) product tree: diffusion branch +-sqrt(T/k) with
/// probability 1/2 after the jump split, per-mark jump probability lambda T/k,
/// C_t = floor(k t / T) T / k.
StandardData build_random_walk_data(int k, double T, GeneratorSpec gen, const TerminalMap& g,
                                    double lambda, MarkSpace marks);

/// Single-branch tree with trivial drivers and constant terminal value.
StandardData build_deterministic_data(int n, double T, GeneratorSpec gen, double xi);

/// Squared tnorm of a mark-indexed vector at a node via the kernel formula.
double tnorm_sq(const StandardData& data, int node, const std::vector<double>& U);

struct NodeCharacteristics {
    double d_angle_xo = 0;  // E[(dXo)^2 | node]
    double c2 = 0;          // d<Xo>/dC
    double zeta_nat = 0;    // nu atom mass total
    double dA = 0;
    double dC = 0;
    std::vector<double> kernel;  // K(x_j) = w_j / dC
};

/// Per-node predictable characteristics for every non-leaf node (leaves get
/// zero entries).
std::vector<NodeCharacteristics> predictable_brackets(const StandardData& data);

struct ConditionReport {
    struct Item {
        std::string name;
        bool pass = false;
        double value = 0;
        std::string detail;
    };
    std::vector<Item> items;
    bool all_pass = false;

    const Item& item(const std::string& name) const;
};

ConditionReport validate_conditions(const StandardData& data, double A_bar, double beta_hat);
ConditionReport validate_conditions(const std::vector<StandardData>& seq, double A_bar,
                                    double beta_hat);

}  // namespace bsdelab
