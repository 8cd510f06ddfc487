#pragma once

#include <string>
#include <vector>

namespace bsdelab {

struct Edge {
    int child = -1;
    double prob = 0;
    double dxo = 0;   // continuous-driver increment along the edge
    int mark = -1;    // jump-mark index, -1 = no jump
};

struct TreeNode {
    int level = 0;
    int parent = -1;
    int parent_edge = -1;  // index into parent's edge list
    std::vector<Edge> edges;
    double path_prob = 0;
};

/// Finite rooted probability tree; node 0 is the root, every leaf sits at the
/// last level, per-node transition probabilities sum to 1.
struct ScenarioTree {
    std::vector<double> times;  // t_0 .. t_n
    std::vector<TreeNode> nodes;
    std::vector<int> leaves;

    int levels() const { return static_cast<int>(times.size()) - 1; }
    bool is_leaf(int v) const { return nodes[v].edges.empty(); }

    /// Fill path probabilities and the leaf list; verify the invariants.
    void finalize(double tol = 1e-12);
};

}  // namespace bsdelab
