#include "bsdelab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace bsdelab {

PicardSolution PicardSolution::zero(const StandardData& data) {
    PicardSolution s;
    s.Y.assign(data.tree.nodes.size(), 0.0);
    s.Z.assign(data.tree.nodes.size(), 0.0);
    s.U.assign(data.tree.nodes.size(), std::vector<double>(data.n_marks(), 0.0));
    s.dN.assign(data.tree.nodes.size(), 0.0);
    s.iteration = 0;
    return s;
}

PicardSolution PicardSolution::diff(const PicardSolution& other) const {
    PicardSolution d = *this;
    for (std::size_t v = 0; v < Y.size(); ++v) {
        d.Y[v] -= other.Y[v];
        d.Z[v] -= other.Z[v];
        for (std::size_t j = 0; j < d.U[v].size(); ++j) d.U[v][j] -= other.U[v][j];
        d.dN[v] -= other.dN[v];
    }
    return d;
}

std::vector<double> backward_project(const ScenarioTree& tree,
                                     const std::vector<double>& leaf_values) {
    if (leaf_values.size() != tree.leaves.size())
        throw std::invalid_argument("backward_project: leaf value count mismatch");
    std::vector<double> val(tree.nodes.size(), 0.0);
    for (std::size_t i = 0; i < tree.leaves.size(); ++i) val[tree.leaves[i]] = leaf_values[i];
    for (std::size_t v = tree.nodes.size(); v-- > 0;) {
        const TreeNode& n = tree.nodes[v];
        if (n.edges.empty()) continue;
        double s = 0;
        for (const Edge& e : n.edges) s += e.prob * val[e.child];
        val[v] = s;
    }
    return val;
}

namespace {

// Jacobi eigendecomposition of a small symmetric matrix; used for the
// minimum-norm (pseudo-inverse) Gram solve in the GKW decomposition.
void jacobi_eigen(std::vector<std::vector<double>>& A, std::vector<std::vector<double>>& V) {
    const std::size_t n = A.size();
    V.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) V[i][i] = 1.0;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += A[p][q] * A[p][q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::fabs(A[p][q]) < 1e-300) continue;
                double theta = (A[q][q] - A[p][p]) / (2 * A[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    double aip = A[i][p], aiq = A[i][q];
                    A[i][p] = c * aip - s * aiq;
                    A[i][q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    double api = A[p][i], aqi = A[q][i];
                    A[p][i] = c * api - s * aqi;
                    A[q][i] = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    double vip = V[i][p], viq = V[i][q];
                    V[i][p] = c * vip - s * viq;
                    V[i][q] = s * vip + c * viq;
                }
            }
        }
    }
}

std::vector<double> pinv_solve(std::vector<std::vector<double>> G, std::vector<double> b) {
    const std::size_t n = G.size();
    std::vector<std::vector<double>> V;
    jacobi_eigen(G, V);
    double emax = 0;
    for (std::size_t i = 0; i < n; ++i) emax = std::max(emax, std::fabs(G[i][i]));
    double thresh = emax * 1e-12;
    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double lam = G[i][i];
        if (std::fabs(lam) <= thresh) continue;
        double proj = 0;
        for (std::size_t r = 0; r < n; ++r) proj += V[r][i] * b[r];
        proj /= lam;
        for (std::size_t r = 0; r < n; ++r) x[r] += proj * V[r][i];
    }
    return x;
}

}  // namespace

GkwResult gkw_decompose(const std::vector<double>& M, const StandardData& data) {
    const auto& tree = data.tree;
    if (M.size() != tree.nodes.size())
        throw std::invalid_argument("gkw_decompose: node value count mismatch");
    GkwResult out;
    const std::size_t nm = data.n_marks();
    out.Z.assign(tree.nodes.size(), 0.0);
    out.U.assign(tree.nodes.size(), std::vector<double>(nm, 0.0));
    out.dN.assign(tree.nodes.size(), 0.0);

    for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
        const TreeNode& nd = tree.nodes[v];
        if (nd.edges.empty()) continue;
        const std::vector<double>& w = data.jump_prob[v];
        std::vector<int> active;  // marks with positive kernel mass
        for (std::size_t j = 0; j < nm; ++j)
            if (w[j] > 0) active.push_back(static_cast<int>(j));
        const std::size_t q = 1 + active.size();

        double mart = 0;
        for (const Edge& e : nd.edges) mart += e.prob * (M[e.child] - M[v]);
        out.max_martingale_residual = std::max(out.max_martingale_residual, std::fabs(mart));

        // basis phi_0 = dXo, phi_j = 1_{mark = j} - w_j
        auto phi = [&](std::size_t a, const Edge& e) -> double {
            if (a == 0) return e.dxo;
            int j = active[a - 1];
            return (e.mark == j ? 1.0 : 0.0) - w[j];
        };
        std::vector<std::vector<double>> G(q, std::vector<double>(q, 0.0));
        std::vector<double> b(q, 0.0);
        for (const Edge& e : nd.edges) {
            double dM = M[e.child] - M[v];
            for (std::size_t a = 0; a < q; ++a) {
                double pa = phi(a, e);
                b[a] += e.prob * dM * pa;
                for (std::size_t c2 = a; c2 < q; ++c2) G[a][c2] += e.prob * pa * phi(c2, e);
            }
        }
        for (std::size_t a = 0; a < q; ++a)
            for (std::size_t c2 = 0; c2 < a; ++c2) G[a][c2] = G[c2][a];
        std::vector<double> coef = pinv_solve(G, b);
        out.Z[v] = coef[0];
        for (std::size_t a = 1; a < q; ++a) out.U[v][active[a - 1]] = coef[a];

        for (const Edge& e : nd.edges) {
            double dJ = 0;
            for (std::size_t a = 1; a < q; ++a) dJ += coef[a] * phi(a, e);
            out.dN[e.child] = (M[e.child] - M[v]) - out.Z[v] * e.dxo - dJ;
        }
        // orthogonality residuals
        for (std::size_t a = 0; a < q; ++a) {
            double r = 0;
            for (const Edge& e : nd.edges) r += e.prob * out.dN[e.child] * phi(a, e);
            out.max_orthogonality_residual = std::max(out.max_orthogonality_residual, std::fabs(r));
        }
    }
    return out;
}

std::vector<double> lebesgue_integral_L(const StandardData& data, const PicardSolution& S,
                                        Convention conv) {
    const auto& tree = data.tree;
    std::vector<double> L(tree.nodes.size(), 0.0);
    for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
        const TreeNode& nd = tree.nodes[v];
        if (nd.edges.empty()) continue;
        double dC = data.dC[nd.level];
        double t_atom = tree.times[nd.level + 1];
        for (const Edge& e : nd.edges) {
            double y = conv == Convention::Y_left ? S.Y[v] : S.Y[e.child];
            double f = data.gen.f(t_atom, y, S.Z[v], S.U[v], data.jump_prob[v], dC);
            L[e.child] = L[v] + f * dC;
        }
    }
    return L;
}

PicardSolution picard_step(const StandardData& data, const PicardSolution& S, Convention conv) {
    const auto& tree = data.tree;
    std::vector<double> L = lebesgue_integral_L(data, S, conv);
    std::vector<double> terminal(tree.leaves.size());
    for (std::size_t i = 0; i < tree.leaves.size(); ++i)
        terminal[i] = data.xi[i] + L[tree.leaves[i]];
    std::vector<double> M = backward_project(tree, terminal);
    GkwResult g = gkw_decompose(M, data);
    PicardSolution next;
    next.Y.resize(tree.nodes.size());
    for (std::size_t v = 0; v < tree.nodes.size(); ++v) next.Y[v] = M[v] - L[v];
    next.Z = std::move(g.Z);
    next.U = std::move(g.U);
    next.dN = std::move(g.dN);
    next.iteration = S.iteration + 1;
    return next;
}

StarNorms star_norm(const PicardSolution& S, const StandardData& data, double beta) {
    const auto& tree = data.tree;
    StarNorms out;
    std::vector<double> runmax(tree.nodes.size(), 0.0);
    double a2 = data.alpha * data.alpha;
    for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
        const TreeNode& nd = tree.nodes[v];
        double wY = std::exp(beta * data.cumA[nd.level]) * S.Y[v] * S.Y[v];
        runmax[v] = nd.parent >= 0 ? std::max(runmax[nd.parent], wY) : wY;
        if (nd.edges.empty()) {
            out.y_part += nd.path_prob * runmax[v];
            continue;
        }
        double dC = data.dC[nd.level];
        double wght = std::exp(beta * data.cumA[nd.level + 1]);
        double p = nd.path_prob;
        double dxo2 = 0, dn2 = 0;
        for (const Edge& e : nd.edges) {
            dxo2 += e.prob * e.dxo * e.dxo;
            dn2 += e.prob * S.dN[e.child] * S.dN[e.child];
        }
        out.z_part += p * wght * S.Z[v] * S.Z[v] * dxo2;
        if (data.n_marks() > 0) out.u_part += p * wght * tnorm_sq(data, static_cast<int>(v), S.U[v]) * dC;
        out.n_part += p * wght * dn2;
        out.alpha_y_part += p * wght * a2 * S.Y[v] * S.Y[v] * dC;
    }
    return out;
}

SolveResult solve(const StandardData& data, const ContractionCertificate* cert, SolveOptions opts,
                  bool keep_iterates) {
    SolveResult res;
    double beta = opts.beta;
    if (cert) beta = cert->beta_hat;
    PicardSolution prev = PicardSolution::zero(data);
    PicardSolution cur = prev;
    for (int p = 1; p <= opts.max_p; ++p) {
        cur = picard_step(data, prev, opts.conv);
        double gap = star_norm(cur.diff(prev), data, beta).total();
        res.gap_sq.push_back(gap);
        if (p == 1) res.first_iterate_norm_sq = star_norm(cur, data, beta).total();
        if (keep_iterates) res.iterates.push_back(cur);
        res.iterations = p;
        if (gap < opts.tol * opts.tol) {
            res.converged = true;
            prev = cur;
            break;
        }
        prev = cur;
    }
    res.S = prev;
    return res;
}

GammaStats gamma_functional(const StandardData& data, const PicardSolution& S, double delta) {
    const auto& tree = data.tree;
    GammaStats out;
    double a2 = data.alpha * data.alpha;
    std::vector<double> G(tree.nodes.size(), 0.0);
    for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
        const TreeNode& nd = tree.nodes[v];
        if (nd.edges.empty()) continue;
        double dC = data.dC[nd.level];
        double t_atom = tree.times[nd.level + 1];
        double f = data.gen.f(t_atom, S.Y[v], S.Z[v], S.U[v], data.jump_prob[v], dC);
        if (f != 0 && a2 == 0)
            throw std::runtime_error("gamma_functional: alpha = 0 where f != 0");
        double inc = a2 > 0 ? f * f / a2 * dC : 0.0;
        for (const Edge& e : nd.edges) G[e.child] = G[v] + inc;
    }
    for (std::size_t i = 0; i < tree.leaves.size(); ++i) {
        double g = G[tree.leaves[i]];
        double p = tree.nodes[tree.leaves[i]].path_prob;
        out.per_leaf.push_back(g);
        out.mean += p * g;
        out.moment_1_plus_delta += p * std::pow(g, 1 + delta);
    }
    return out;
}

double m2_increment(const PicardSolution& S, const StandardData& data, int child) {
    const TreeNode& cn = data.tree.nodes[child];
    if (cn.parent < 0) return 0;
    const Edge& e = data.tree.nodes[cn.parent].edges[cn.parent_edge];
    double nuhat = 0;
    const std::vector<double>& w = data.jump_prob[cn.parent];
    for (std::size_t j = 0; j < w.size(); ++j) nuhat += w[j] * S.U[cn.parent][j];
    double ju = e.mark >= 0 ? S.U[cn.parent][e.mark] : 0.0;
    return S.Z[cn.parent] * e.dxo + ju - nuhat;
}

const std::array<const char*, 6>& BracketSet::square_names() {
    static const std::array<const char*, 6> n = {"[Y]", "[M2]", "[N]", "[Y,Xo]", "[Y,Xnat]", "[Y,N]"};
    return n;
}

const std::array<const char*, 7>& BracketSet::angle_names() {
    static const std::array<const char*, 7> n = {"<Y>",    "<Z.Xo>",  "<U*mu>", "<N>",
                                                 "<Y,Xo>", "<Y,Xnat>", "<Y,N>"};
    return n;
}

BracketSet brackets(const PicardSolution& S, const StandardData& data) {
    const auto& tree = data.tree;
    BracketSet out;
    for (auto& v : out.square) v.assign(tree.nodes.size(), 0.0);
    for (auto& v : out.angle) v.assign(tree.nodes.size(), 0.0);

    for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
        const TreeNode& nd = tree.nodes[v];
        if (nd.edges.empty()) continue;
        double drift = data.compensator_drift(static_cast<int>(v));
        const std::vector<double>& w = data.jump_prob[v];
        double nuhat = 0;
        for (std::size_t j = 0; j < w.size(); ++j) nuhat += w[j] * S.U[v][j];

        std::array<double, 7> ang{};
        for (const Edge& e : nd.edges) {
            double dY = S.Y[e.child] - S.Y[v];
            double dZX = S.Z[v] * e.dxo;
            double jump = e.mark >= 0 ? data.marks.marks[e.mark] : 0.0;
            double dU = (e.mark >= 0 ? S.U[v][e.mark] : 0.0) - nuhat;
            double dM2 = dZX + dU;
            double dN = S.dN[e.child];
            double dXo = e.dxo;
            double dXnat = jump - drift;

            out.square[0][e.child] = out.square[0][v] + dY * dY;
            out.square[1][e.child] = out.square[1][v] + dM2 * dM2;
            out.square[2][e.child] = out.square[2][v] + dN * dN;
            out.square[3][e.child] = out.square[3][v] + dY * dXo;
            out.square[4][e.child] = out.square[4][v] + dY * dXnat;
            out.square[5][e.child] = out.square[5][v] + dY * dN;

            ang[0] += e.prob * dY * dY;
            ang[1] += e.prob * dZX * dZX;
            ang[2] += e.prob * dU * dU;
            ang[3] += e.prob * dN * dN;
            ang[4] += e.prob * dY * dXo;
            ang[5] += e.prob * dY * dXnat;
            ang[6] += e.prob * dY * dN;
        }
        for (const Edge& e : nd.edges)
            for (std::size_t o = 0; o < 7; ++o) out.angle[o][e.child] = out.angle[o][v] + ang[o];
    }
    return out;
}

std::string solution_to_csv(const PicardSolution& S, const StandardData& data) {
    std::ostringstream os;
    char buf[64];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    os << "node,level,Y,Z";
    for (std::size_t j = 0; j < data.n_marks(); ++j) os << ",U" << j;
    os << ",dN\n";
    for (std::size_t v = 0; v < data.tree.nodes.size(); ++v) {
        os << v << ',' << data.tree.nodes[v].level << ',' << num(S.Y[v]) << ',' << num(S.Z[v]);
        for (std::size_t j = 0; j < data.n_marks(); ++j) os << ',' << num(S.U[v][j]);
        os << ',' << num(S.dN[v]) << '\n';
    }
    return os.str();
}

}  // namespace bsdelab
