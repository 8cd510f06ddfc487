#include "bsdelab/standard_data.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bsdelab {

void MarkSpace::validate() const {
    for (std::size_t i = 0; i < marks.size(); ++i) {
        if (marks[i] == 0) throw std::invalid_argument("MarkSpace: marks must be nonzero");
        for (std::size_t j = i + 1; j < marks.size(); ++j)
            if (marks[i] == marks[j])
                throw std::invalid_argument("MarkSpace: marks must be distinct");
    }
}

void StandardData::finalize() {
    marks.validate();
    tree.finalize();
    const int n = tree.levels();
    if (static_cast<int>(dC.size()) != n)
        throw std::invalid_argument("StandardData: dC size must equal level count");
    for (double d : dC)
        if (!(d > 0)) throw std::invalid_argument("StandardData: dC increments must be positive");
    if (jump_prob.size() != tree.nodes.size())
        throw std::invalid_argument("StandardData: jump_prob must be node-indexed");
    if (xi.size() != tree.leaves.size())
        throw std::invalid_argument("StandardData: xi must be leaf-indexed");

    // kernel consistency: the per-mark edge probabilities must reproduce the
    // compensator atoms, and zeta <= 1
    for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
        const TreeNode& nd = tree.nodes[v];
        if (nd.edges.empty()) continue;
        const std::vector<double>& w = jump_prob[v];
        if (w.size() != marks.marks.size())
            throw std::invalid_argument("StandardData: jump_prob row size mismatch");
        double zeta = 0;
        for (double wj : w) {
            if (wj < 0) throw std::invalid_argument("StandardData: negative kernel mass");
            zeta += wj;
        }
        if (zeta > 1 + 1e-12)
            throw std::invalid_argument("StandardData: zeta_nat > 1 at a node");
        for (std::size_t j = 0; j < w.size(); ++j) {
            double p = 0;
            for (const Edge& e : nd.edges)
                if (e.mark == static_cast<int>(j)) p += e.prob;
            if (std::fabs(p - w[j]) > 1e-10)
                throw std::invalid_argument("StandardData: edge mark probabilities disagree with "
                                            "the compensator kernel");
        }
    }

    // driver paths
    xo.assign(tree.nodes.size(), 0.0);
    xnat.assign(tree.nodes.size(), 0.0);
    for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
        const TreeNode& nd = tree.nodes[v];
        double drift = compensator_drift(static_cast<int>(v));
        for (const Edge& e : nd.edges) {
            xo[e.child] = xo[v] + e.dxo;
            double jump = e.mark >= 0 ? marks.marks[e.mark] : 0.0;
            xnat[e.child] = xnat[v] + jump - drift;
        }
    }

    // instance-dependent Lipschitz data for the jump-linear generator:
    // theta_nat^2 = a^2 zeta / ((1 - zeta) dC), maximized over nodes
    if (gen.name == "jump_linear") {
        double th2 = 0;
        for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
            if (tree.nodes[v].edges.empty()) continue;
            double zeta = 0;
            for (double wj : jump_prob[v]) zeta += wj;
            if (zeta <= 0) continue;
            if (zeta >= 1) throw std::invalid_argument("StandardData: jump_linear needs zeta < 1");
            th2 = std::max(th2, gen.a * gen.a * zeta /
                                    ((1 - zeta) * dC[tree.nodes[v].level]));
        }
        gen.theta_nat = std::sqrt(th2);
    }

    alpha = gen.alpha();
    cumC.assign(n + 1, 0.0);
    cumA.assign(n + 1, 0.0);
    phi = 0;
    for (int i = 0; i < n; ++i) {
        cumC[i + 1] = cumC[i] + dC[i];
        double dA = alpha * alpha * dC[i];
        cumA[i + 1] = cumA[i] + dA;
        phi = std::max(phi, dA);
    }
    if (phi_declared < 0) phi_declared = phi;
}

PathView StandardData::leaf_path(int leaf) const {
    PathView p;
    for (int v = leaf; v >= 0; v = tree.nodes[v].parent) p.nodes.push_back(v);
    std::reverse(p.nodes.begin(), p.nodes.end());
    for (int v : p.nodes) {
        p.times.push_back(tree.times[tree.nodes[v].level]);
        p.xo.push_back(xo[v]);
        p.xnat.push_back(xnat[v]);
    }
    return p;
}

double StandardData::compensator_drift(int node) const {
    const std::vector<double>& w = jump_prob[node];
    double s = 0;
    for (std::size_t j = 0; j < w.size(); ++j) s += marks.marks[j] * w[j];
    return s;
}

StandardData build_random_walk_data(int k, double T, GeneratorSpec gen, const TerminalMap& g,
                                    double lambda, MarkSpace marks) {
    if (k < 1) throw std::invalid_argument("build_random_walk_data: need k >= 1");
    if (!(T > 0)) throw std::invalid_argument("build_random_walk_data: need T > 0");
    marks.validate();
    const std::size_t nm = lambda > 0 ? marks.marks.size() : 0;
    const double pj = lambda * T / k;
    const double zeta = pj * static_cast<double>(nm);
    if (zeta >= 1)
        throw std::invalid_argument("build_random_walk_data: per-step jump probability >= 1");
    const std::size_t branching = 2 * (nm + 1);
    double total = 1;
    for (int i = 0; i < k; ++i) {
        total *= static_cast<double>(branching);
        if (total > 6e5)
            throw std::invalid_argument("build_random_walk_data: exact tree too large; use the "
                                        "sampling harness for this k");
    }

    StandardData d;
    d.T = T;
    d.marks = lambda > 0 ? marks : MarkSpace{};
    d.gen = std::move(gen);
    d.dC.assign(k, T / k);
    d.tree.times.resize(k + 1);
    for (int i = 0; i <= k; ++i) d.tree.times[i] = T * i / k;

    const double h = std::sqrt(T / k);
    d.tree.nodes.push_back(TreeNode{0, -1, -1, {}, 0});
    std::vector<int> frontier{0};
    for (int lev = 0; lev < k; ++lev) {
        std::vector<int> next;
        for (int v : frontier) {
            for (int sign : {+1, -1}) {
                for (int j = -1; j < static_cast<int>(nm); ++j) {
                    Edge e;
                    e.prob = 0.5 * (j < 0 ? 1 - zeta : pj);
                    e.dxo = sign * h;
                    e.mark = j;
                    e.child = static_cast<int>(d.tree.nodes.size());
                    d.tree.nodes.push_back(TreeNode{lev + 1, v, -1, {}, 0});
                    d.tree.nodes[v].edges.push_back(e);
                    next.push_back(e.child);
                }
            }
        }
        frontier = std::move(next);
    }
    d.jump_prob.assign(d.tree.nodes.size(), std::vector<double>(d.marks.marks.size(), 0.0));
    for (std::size_t v = 0; v < d.tree.nodes.size(); ++v) {
        if (d.tree.nodes[v].edges.empty()) continue;
        for (std::size_t j = 0; j < d.marks.marks.size(); ++j) d.jump_prob[v][j] = pj;
    }
    d.tree.finalize();
    // drivers must exist before xi can be evaluated on leaf paths
    d.xi.assign(d.tree.leaves.size(), 0.0);
    StandardData tmp = d;
    tmp.finalize();
    for (std::size_t i = 0; i < tmp.tree.leaves.size(); ++i)
        d.xi[i] = g(tmp.leaf_path(tmp.tree.leaves[i]));
    d.finalize();
    return d;
}

StandardData build_deterministic_data(int n, double T, GeneratorSpec gen, double xi) {
    if (n < 1) throw std::invalid_argument("build_deterministic_data: need n >= 1");
    StandardData d;
    d.T = T;
    d.gen = std::move(gen);
    d.dC.assign(n, T / n);
    d.tree.times.resize(n + 1);
    for (int i = 0; i <= n; ++i) d.tree.times[i] = T * i / n;
    for (int i = 0; i <= n; ++i) d.tree.nodes.push_back(TreeNode{i, i - 1, 0, {}, 0});
    for (int i = 0; i < n; ++i) d.tree.nodes[i].edges.push_back(Edge{i + 1, 1.0, 0.0, -1});
    d.jump_prob.assign(d.tree.nodes.size(), {});
    d.xi = {xi};
    d.finalize();
    return d;
}

double tnorm_sq(const StandardData& data, int node, const std::vector<double>& U) {
    const std::vector<double>& w = data.jump_prob[node];
    if (U.size() != w.size()) throw std::invalid_argument("tnorm_sq: U size mismatch");
    double dC = data.dC_at(node);
    double m = 0, zeta = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        m += w[j] * U[j];
        zeta += w[j];
    }
    double s = 0;
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * (U[j] - m) * (U[j] - m);
    return (s + (1 - zeta) * m * m) / dC;
}

std::vector<NodeCharacteristics> predictable_brackets(const StandardData& data) {
    std::vector<NodeCharacteristics> out(data.tree.nodes.size());
    for (std::size_t v = 0; v < data.tree.nodes.size(); ++v) {
        const TreeNode& nd = data.tree.nodes[v];
        if (nd.edges.empty()) continue;
        NodeCharacteristics& c = out[v];
        c.dC = data.dC[nd.level];
        for (const Edge& e : nd.edges) c.d_angle_xo += e.prob * e.dxo * e.dxo;
        if (c.d_angle_xo > 0 && !(c.dC > 0))
            throw std::runtime_error("predictable_brackets: dC = 0 at a step with nonzero "
                                     "driver variance");
        c.c2 = c.d_angle_xo / c.dC;
        for (double wj : data.jump_prob[v]) {
            c.zeta_nat += wj;
            c.kernel.push_back(wj / c.dC);
        }
        c.dA = data.alpha * data.alpha * c.dC;
    }
    return out;
}

const ConditionReport::Item& ConditionReport::item(const std::string& name) const {
    for (const auto& it : items)
        if (it.name == name) return it;
    throw std::invalid_argument("ConditionReport: unknown item " + name);
}

namespace {

void add_item(ConditionReport& rep, const std::string& name, bool pass, double value,
              const std::string& detail = "") {
    rep.items.push_back({name, pass, value, detail});
}

}  // namespace

ConditionReport validate_conditions(const StandardData& data, double A_bar, double beta_hat) {
    ConditionReport rep;
    double A_T = data.cumA.back();
    add_item(rep, "A_T_bounded", A_T <= A_bar + 1e-12, A_T);
    double maxdA = data.phi;
    bool phi_ok = maxdA <= data.phi_declared + 1e-12;
    std::ostringstream os;
    if (!phi_ok) {
        for (std::size_t i = 1; i < data.cumA.size(); ++i)
            if (data.cumA[i] - data.cumA[i - 1] > data.phi_declared + 1e-12) {
                os << "dA exceeds declared Phi at level " << i - 1;
                break;
            }
    }
    add_item(rep, "dA_le_phi", phi_ok, maxdA, os.str());

    double max_prob_err = 0, max_kernel_err = 0, max_zeta = 0, max_mean_dxo = 0;
    for (std::size_t v = 0; v < data.tree.nodes.size(); ++v) {
        const TreeNode& nd = data.tree.nodes[v];
        if (nd.edges.empty()) continue;
        double s = 0, mx = 0;
        for (const Edge& e : nd.edges) {
            s += e.prob;
            mx += e.prob * e.dxo;
        }
        max_prob_err = std::max(max_prob_err, std::fabs(s - 1.0));
        max_mean_dxo = std::max(max_mean_dxo, std::fabs(mx));
        double zeta = 0;
        for (std::size_t j = 0; j < data.jump_prob[v].size(); ++j) {
            double p = 0;
            for (const Edge& e : nd.edges)
                if (e.mark == static_cast<int>(j)) p += e.prob;
            max_kernel_err = std::max(max_kernel_err, std::fabs(p - data.jump_prob[v][j]));
            zeta += data.jump_prob[v][j];
        }
        max_zeta = std::max(max_zeta, zeta);
    }
    add_item(rep, "probability_sums", max_prob_err <= 1e-10, max_prob_err);
    add_item(rep, "driver_martingale", max_mean_dxo <= 1e-10, max_mean_dxo);
    add_item(rep, "compensator_consistency", max_kernel_err <= 1e-10, max_kernel_err);
    add_item(rep, "zeta_le_one", max_zeta <= 1 + 1e-12, max_zeta);

    double m2 = 0, m2d = 0;
    const double delta = 0.25;
    for (std::size_t i = 0; i < data.tree.leaves.size(); ++i) {
        double p = data.tree.nodes[data.tree.leaves[i]].path_prob;
        double x = std::fabs(data.xi[i]);
        m2 += p * x * x;
        m2d += p * std::pow(x, 2 + delta);
    }
    add_item(rep, "xi_square_integrable", std::isfinite(m2), m2);
    add_item(rep, "xi_moment_2_plus_delta", std::isfinite(m2d), m2d);
    add_item(rep, "beta_weight_representable", beta_hat * A_T < 700.0, beta_hat * A_T,
             "e^{beta A_T} must stay inside double range");

    rep.all_pass = true;
    for (const auto& it : rep.items) rep.all_pass = rep.all_pass && it.pass;
    return rep;
}

ConditionReport validate_conditions(const std::vector<StandardData>& seq, double A_bar,
                                    double beta_hat) {
    ConditionReport rep;
    bool all = true;
    double max_moment = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        ConditionReport r = validate_conditions(seq[i], A_bar, beta_hat);
        all = all && r.all_pass;
        max_moment = std::max(max_moment, r.item("xi_moment_2_plus_delta").value);
        std::ostringstream os;
        os << "k-index " << i;
        add_item(rep, "instance_" + std::to_string(i), r.all_pass, 0, os.str());
    }
    add_item(rep, "xi_moment_sup", std::isfinite(max_moment), max_moment,
             "de la Vallee Poussin proxy: sup_k E|xi|^{2+delta}");
    rep.all_pass = all && std::isfinite(max_moment);
    return rep;
}

std::string StandardData::to_json() const {
    nlohmann::json j;
    j["T"] = T;
    j["times"] = tree.times;
    j["dC"] = dC;
    j["marks"] = marks.marks;
    j["phi_declared"] = phi_declared;
    j["A_bar"] = A_bar;
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
        nlohmann::json n;
        n["level"] = tree.nodes[v].level;
        nlohmann::json edges = nlohmann::json::array();
        for (const Edge& e : tree.nodes[v].edges)
            edges.push_back({{"child", e.child}, {"prob", e.prob}, {"dxo", e.dxo}, {"mark", e.mark}});
        n["edges"] = edges;
        n["jump_prob"] = jump_prob[v];
        nodes.push_back(n);
    }
    j["nodes"] = nodes;
    j["xi"] = xi;
    j["generator"] = {{"name", gen.name}, {"a", gen.a},       {"b", gen.b},
                      {"r", gen.r},       {"theta_circ", gen.theta_circ},
                      {"theta_nat", gen.theta_nat}, {"alpha_floor", gen.alpha_floor}};
    return j.dump(2);
}

StandardData StandardData::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    StandardData d;
    d.T = j.at("T").get<double>();
    d.tree.times = j.at("times").get<std::vector<double>>();
    d.dC = j.at("dC").get<std::vector<double>>();
    d.marks.marks = j.at("marks").get<std::vector<double>>();
    d.phi_declared = j.value("phi_declared", -1.0);
    d.A_bar = j.value("A_bar", 1e9);
    for (const auto& n : j.at("nodes")) {
        TreeNode node;
        node.level = n.at("level").get<int>();
        for (const auto& e : n.at("edges"))
            node.edges.push_back(Edge{e.at("child").get<int>(), e.at("prob").get<double>(),
                                      e.at("dxo").get<double>(), e.at("mark").get<int>()});
        d.tree.nodes.push_back(node);
        d.jump_prob.push_back(n.at("jump_prob").get<std::vector<double>>());
    }
    d.xi = j.at("xi").get<std::vector<double>>();
    const auto& g = j.at("generator");
    d.gen = make_generator(g.at("name").get<std::string>(), g.value("a", 0.0), g.value("b", 0.0));
    d.gen.r = g.value("r", d.gen.r);
    d.gen.theta_circ = g.value("theta_circ", d.gen.theta_circ);
    d.gen.theta_nat = g.value("theta_nat", d.gen.theta_nat);
    d.gen.alpha_floor = g.value("alpha_floor", d.gen.alpha_floor);
    d.finalize();
    return d;
}

}  // namespace bsdelab
