#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bsdelab/moore_osgood.hpp"
#include "bsdelab/reference.hpp"
#include "bsdelab/solver.hpp"
#include "bsdelab/step_path.hpp"

namespace bsdelab {

struct ExperimentConfig {
    std::string problem = "martingale-square";
    std::vector<int> k_list = {2, 4, 8};
    int p_max = 8;
    double T = 1.0;
    double lambda = 0.5;
    double beta_hat = 300.0;
    double A_bar = 1e9;
    int n_paths = 10000;
    std::uint64_t seed = 1;
    double tol = 1e-8;
    Convention convention = Convention::Y_left;

    /// key=value lines; '#' starts a comment; k_list is comma-separated.
    static ExperimentConfig from_text(const std::string& text);
    std::string to_text() const;
};

/// Problem catalog entry: generator, terminal map, and driver shape.
struct ProblemSetup {
    GeneratorSpec gen;
    TerminalMap g;
    std::function<double(double)> g_of_x;  // terminal as function of the driver endpoint
    bool deterministic = false;
    double jump_lambda = 0;  // mark intensity; marks = {1} when positive
    double xi_const = 1.0;   // terminal value of deterministic problems
};

ProblemSetup make_problem(const std::string& id, const ExperimentConfig& cfg);

/// Build the k-th standard data instance of a catalog problem (exact tree).
StandardData build_problem_data(const std::string& id, int k, const ExperimentConfig& cfg);

/// One coupled scenario: the solved path and the closed-form limit evaluated
/// on the same driver, with terminal values, angle brackets at T, and the
/// orthogonal-residual bracket.
struct ScenarioEval {
    StepPath y_k;
    StepPath y_ref;
    double terminal_k = 0;
    double terminal_ref = 0;
    std::array<double, 7> angle_k{};
    std::array<double, 7> angle_ref{};
    double n_bracket = 0;  // <N^k>_T
    double prob = 0;

    ScenarioEval() : y_k(StepPath::constant(0, 1)), y_ref(StepPath::constant(0, 1)) {}
};

struct DistanceSummary {
    double j1_y_mean = 0;     // E[(1 AND J1(Y^k, Y^ref))^2]
    double terminal_l2 = 0;   // E[(Y^k_T - Y^ref_T)^2]
    std::array<double, 7> bracket_l1{};  // E|<.>^k_T - <.>^ref_T| per object
    double n_mean = 0;        // E[<N^k>_T]
};

/// Monte Carlo / exact-tree means of the Theorem-style distances over coupled
/// scenario pairs.  Throws if the pair lists are mismatched.
DistanceSummary distance_estimators(const std::vector<ScenarioEval>& scenarios, double window);

struct KRow {
    int k = 0;
    bool exact = true;  // exact scenario tree vs lattice + sampled paths
    double y0 = 0;
    std::vector<double> picard_gap;  // ||S - S^{(p)}||_{*,beta} for p = 1..p_max
    double first_iterate_norm_sq = 0;
    DistanceSummary dist;
    double gamma_mean = 0;
    double gamma_moment = 0;  // E[Gamma^{1+delta}]
};

struct ExperimentResult {
    ExperimentConfig cfg;
    std::vector<KRow> rows;
    DoubleTable gap_table;  // rows k, columns p, cells picard_gap
    MooreOsgoodVerdict mo;
    ContractionCertificate cert;
    bool certified = false;
    double y_ref_0 = 0;  // limit value at the origin
};

/// Per-scenario evaluation of an exact-tree solve against the closed-form
/// reference (all leaves, probability-weighted).
std::vector<ScenarioEval> evaluate_exact(const StandardData& data, const std::string& problem,
                                         const PicardSolution& S);

/// Driver-only large-k path: samples n_paths binomial scenarios from the
/// recombining lattice (requires f = 0 and no jumps).
std::vector<ScenarioEval> evaluate_lattice(const std::string& problem, int k,
                                           const ExperimentConfig& cfg, double* y0_out);

/// The doubly-indexed (k, p) convergence run: solve every k, fill the Picard
/// gap table, compute reference distances, and run the Moore-Osgood check.
ExperimentResult stability_experiment(const ExperimentConfig& cfg);

/// True when branching^k exceeds the exact-tree guard for this problem.
bool needs_sampling(const std::string& id, int k, const ExperimentConfig& cfg);

}  // namespace bsdelab
