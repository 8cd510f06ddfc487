#pragma once

#include <array>
#include <string>
#include <vector>

#include "bsdelab/contraction.hpp"
#include "bsdelab/standard_data.hpp"

namespace bsdelab {

enum class Convention { Y_left, Y_right };

/// Adapted solution quadruple on a tree.  Z and U are predictable controls:
/// the value stored at a node steers the step towards its children.  dN holds
/// the orthogonal-martingale increment realized on the edge arriving at each
/// node (0 at the root).
struct PicardSolution {
    std::vector<double> Y;
    std::vector<double> Z;
    std::vector<std::vector<double>> U;
    std::vector<double> dN;
    int iteration = 0;

    static PicardSolution zero(const StandardData& data);
    PicardSolution diff(const PicardSolution& other) const;  // componentwise difference
};

/// Exact conditional expectation of a terminal vector: node value =
/// probability-weighted child average.
std::vector<double> backward_project(const ScenarioTree& tree,
                                     const std::vector<double>& leaf_values);

struct GkwResult {
    std::vector<double> Z;
    std::vector<std::vector<double>> U;
    std::vector<double> dN;
    double max_orthogonality_residual = 0;
    double max_martingale_residual = 0;
};

/// Orthogonal decomposition of a node-wise martingale M:
/// dM = Z dXo + (U(mark) - nuhat(U)) + dN with dN orthogonal to dXo and to
/// every mark indicator; per node a small Gram system, pseudo-inverted when
/// singular (minimum-norm convention).
GkwResult gkw_decompose(const std::vector<double>& M, const StandardData& data);

/// Running Lebesgue-Stieltjes integral L_t = int f(s, Y, Z, U) dC along each
/// scenario; Y is read at its left limit (Y_left) or at the atom (Y_right).
std::vector<double> lebesgue_integral_L(const StandardData& data, const PicardSolution& S,
                                        Convention conv = Convention::Y_left);

PicardSolution picard_step(const StandardData& data, const PicardSolution& S,
                           Convention conv = Convention::Y_left);

struct StarNorms {
    double y_part = 0;      // E[sup e^{beta A} Y^2]
    double z_part = 0;      // E[int e^{beta A} Z^2 d<Xo>]
    double u_part = 0;      // E[int e^{beta A} tnorm(U)^2 dC]
    double n_part = 0;      // E[int e^{beta A} d<N>]
    double alpha_y_part = 0;  // the non-sup ||alpha Y|| variant
    double total() const { return y_part + z_part + u_part + n_part; }
};

StarNorms star_norm(const PicardSolution& S, const StandardData& data, double beta);

struct SolveOptions {
    double tol = 1e-10;
    int max_p = 60;
    double beta = 0;  // weight for the gap norms; certificate beta_hat when certified
    Convention conv = Convention::Y_left;
};

struct SolveResult {
    PicardSolution S;
    std::vector<double> gap_sq;            // ||S^{(p+1)} - S^{(p)}||^2 per step, p = 0, 1, ...
    double first_iterate_norm_sq = 0;      // ||S^{(1)}||^2 in the same norm
    std::vector<PicardSolution> iterates;  // S^{(1)} .. S^{(p)} when kept
    bool converged = false;
    int iterations = 0;
};

SolveResult solve(const StandardData& data, const ContractionCertificate* cert,
                  SolveOptions opts, bool keep_iterates = false);

struct GammaStats {
    std::vector<double> per_leaf;
    double mean = 0;
    double moment_1_plus_delta = 0;
};

GammaStats gamma_functional(const StandardData& data, const PicardSolution& S,
                            double delta = 0.25);

/// The 6 square-bracket and 7 angle-bracket processes of the convergence
/// statement, node-indexed running values (0 at the root).
struct BracketSet {
    // square: [Y], [Z.Xo + U*mutilde], [N], [Y,Xo], [Y,Xnat], [Y,N]
    std::array<std::vector<double>, 6> square;
    // angle: <Y>, <Z.Xo>, <U*mutilde>, <N>, <Y,Xo>, <Y,Xnat>, <Y,N>
    std::array<std::vector<double>, 7> angle;

    static const std::array<const char*, 6>& square_names();
    static const std::array<const char*, 7>& angle_names();
};

BracketSet brackets(const PicardSolution& S, const StandardData& data);

/// Per-node martingale-part increment Z dXo + U(mark) - nuhat(U) realized on
/// the edge arriving at `child`.
double m2_increment(const PicardSolution& S, const StandardData& data, int child);

/// Solutions export as CSV (node id, level, Y, Z, U per mark, dN).
std::string solution_to_csv(const PicardSolution& S, const StandardData& data);

}  // namespace bsdelab
