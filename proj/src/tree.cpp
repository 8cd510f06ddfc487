#include "bsdelab/tree.hpp"

#include <cmath>
#include <stdexcept>

namespace bsdelab {

void ScenarioTree::finalize(double tol) {
    if (times.size() < 2) throw std::invalid_argument("ScenarioTree: need at least one level");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("ScenarioTree: times must increase");
    if (nodes.empty()) throw std::invalid_argument("ScenarioTree: empty tree");

    leaves.clear();
    nodes[0].path_prob = 1.0;
    nodes[0].parent = -1;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        TreeNode& n = nodes[v];
        if (n.edges.empty()) {
            if (n.level != levels())
                throw std::invalid_argument("ScenarioTree: leaf not at the last level");
            leaves.push_back(static_cast<int>(v));
            continue;
        }
        double s = 0;
        for (std::size_t e = 0; e < n.edges.size(); ++e) {
            const Edge& ed = n.edges[e];
            if (!(ed.prob > 0))
                throw std::invalid_argument("ScenarioTree: transition probability must be > 0");
            if (ed.child <= static_cast<int>(v) || ed.child >= static_cast<int>(nodes.size()))
                throw std::invalid_argument("ScenarioTree: bad child index");
            s += ed.prob;
            nodes[ed.child].parent = static_cast<int>(v);
            nodes[ed.child].parent_edge = static_cast<int>(e);
            if (nodes[ed.child].level != n.level + 1)
                throw std::invalid_argument("ScenarioTree: child level mismatch");
            nodes[ed.child].path_prob = 0;  // filled below once probs are checked
        }
        if (std::fabs(s - 1.0) > tol)
            throw std::invalid_argument("ScenarioTree: probabilities do not sum to 1");
    }
    for (std::size_t v = 1; v < nodes.size(); ++v) {
        const TreeNode& n = nodes[v];
        if (n.parent < 0) throw std::invalid_argument("ScenarioTree: orphan node");
        nodes[v].path_prob = nodes[n.parent].path_prob * nodes[n.parent].edges[n.parent_edge].prob;
    }
    double leaf_sum = 0;
    for (int l : leaves) leaf_sum += nodes[l].path_prob;
    if (std::fabs(leaf_sum - 1.0) > 1e-10)
        throw std::invalid_argument("ScenarioTree: leaf probabilities do not sum to 1");
}

}  // namespace bsdelab
