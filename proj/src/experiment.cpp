#include "bsdelab/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "bsdelab/lattice.hpp"
#include "bsdelab/rng.hpp"
#include "bsdelab/skorokhod.hpp"

namespace bsdelab {

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key=value, got '" + line + "'");
        auto strip = [](std::string s) {
            auto a = s.find_first_not_of(" \t\r");
            auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = strip(line.substr(0, eq)), val = strip(line.substr(eq + 1));
        if (key == "problem") {
            cfg.problem = val;
        } else if (key == "k_list") {
            cfg.k_list.clear();
            std::istringstream vs(val);
            std::string tok;
            while (std::getline(vs, tok, ',')) cfg.k_list.push_back(std::stoi(strip(tok)));
            if (cfg.k_list.empty()) throw std::invalid_argument("config: empty k_list");
        } else if (key == "p_max") {
            cfg.p_max = std::stoi(val);
        } else if (key == "T") {
            cfg.T = std::stod(val);
        } else if (key == "lambda") {
            cfg.lambda = std::stod(val);
        } else if (key == "beta_hat") {
            cfg.beta_hat = std::stod(val);
        } else if (key == "A_bar") {
            cfg.A_bar = std::stod(val);
        } else if (key == "n_paths") {
            cfg.n_paths = std::stoi(val);
        } else if (key == "seed") {
            cfg.seed = std::stoull(val);
        } else if (key == "tol") {
            cfg.tol = std::stod(val);
        } else if (key == "convention") {
            if (val == "Y_left")
                cfg.convention = Convention::Y_left;
            else if (val == "Y_right")
                cfg.convention = Convention::Y_right;
            else
                throw std::invalid_argument("config: convention must be Y_left or Y_right");
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    if (cfg.p_max < 1 || cfg.n_paths < 1 || cfg.T <= 0 || cfg.tol <= 0)
        throw std::invalid_argument("config: p_max, n_paths, T, tol must be positive");
    return cfg;
}

std::string ExperimentConfig::to_text() const {
    std::ostringstream os;
    os << "problem=" << problem << "\nk_list=";
    for (std::size_t i = 0; i < k_list.size(); ++i) os << (i ? "," : "") << k_list[i];
    os << "\np_max=" << p_max << "\nT=" << fmt(T) << "\nlambda=" << fmt(lambda)
       << "\nbeta_hat=" << fmt(beta_hat) << "\nA_bar=" << fmt(A_bar) << "\nn_paths=" << n_paths
       << "\nseed=" << seed << "\ntol=" << fmt(tol) << "\nconvention="
       << (convention == Convention::Y_left ? "Y_left" : "Y_right") << "\n";
    return os.str();
}

ProblemSetup make_problem(const std::string& id, const ExperimentConfig& cfg) {
    ProblemSetup s;
    if (id == "martingale-square") {
        s.gen = make_generator("zero");
        s.g = [](const PathView& p) { return p.xo_terminal() * p.xo_terminal(); };
        s.g_of_x = [](double x) { return x * x; };
    } else if (id == "martingale-call") {
        s.gen = make_generator("zero");
        s.g = [](const PathView& p) { return std::max(p.xo_terminal(), 0.0); };
        s.g_of_x = [](double x) { return std::max(x, 0.0); };
    } else if (id == "linear-lambda") {
        s.gen = make_generator("linear_y", cfg.lambda);
        s.deterministic = true;
    } else if (id == "ode-limit") {
        s.gen = make_generator("call", cfg.lambda, 0.5);
        s.deterministic = true;
    } else if (id == "jump-linear") {
        s.gen = make_generator("zero");
        s.g = [](const PathView& p) { return p.xnat_terminal(); };
        s.jump_lambda = cfg.lambda;
    } else if (id == "zero") {
        s.gen = make_generator("zero");
        s.g = [](const PathView&) { return 0.0; };
        s.g_of_x = [](double) { return 0.0; };
    } else {
        throw std::invalid_argument("make_problem: unknown problem '" + id + "'");
    }
    return s;
}

bool needs_sampling(const std::string& id, int k, const ExperimentConfig& cfg) {
    ProblemSetup s = make_problem(id, cfg);
    if (s.deterministic) return false;
    double branching = s.jump_lambda > 0 ? 4.0 : 2.0;
    double total = 1;
    for (int i = 0; i < k; ++i) {
        total *= branching;
        if (total > 6e5) return true;
    }
    return false;
}

StandardData build_problem_data(const std::string& id, int k, const ExperimentConfig& cfg) {
    ProblemSetup s = make_problem(id, cfg);
    if (s.deterministic) return build_deterministic_data(k, cfg.T, s.gen, s.xi_const);
    MarkSpace marks;
    if (s.jump_lambda > 0) marks.marks = {1.0};
    return build_random_walk_data(k, cfg.T, s.gen, s.g, s.jump_lambda, marks);
}

std::vector<ScenarioEval> evaluate_exact(const StandardData& data, const std::string& problem,
                                         const PicardSolution& S) {
    ReferenceEval ref = reference_solution(problem, data);
    // wrap the reference as a solution quadruple so that its angle brackets
    // come out of the same code path as the solved one
    PicardSolution R = PicardSolution::zero(data);
    R.Y = ref.Y;
    if (ref.has_Z) R.Z = ref.Z;
    if (problem == "jump-linear")
        for (auto& u : R.U)
            for (std::size_t j = 0; j < u.size(); ++j) u[j] = data.marks.marks[j];
    for (std::size_t v = 0; v < data.tree.nodes.size(); ++v) {
        const TreeNode& nd = data.tree.nodes[v];
        if (nd.parent < 0) continue;
        R.dN[v] = (R.Y[v] - R.Y[nd.parent]) - m2_increment(R, data, static_cast<int>(v));
    }
    BracketSet bk = brackets(S, data);
    BracketSet br = brackets(R, data);

    std::vector<ScenarioEval> out;
    out.reserve(data.tree.leaves.size());
    for (std::size_t i = 0; i < data.tree.leaves.size(); ++i) {
        int leaf = data.tree.leaves[i];
        PathView pv = data.leaf_path(leaf);
        ScenarioEval e;
        e.prob = data.tree.nodes[leaf].path_prob;
        e.y_k = StepPath::constant(S.Y[pv.nodes[0]], data.T);
        e.y_ref = StepPath::constant(R.Y[pv.nodes[0]], data.T);
        for (std::size_t s = 1; s + 1 < pv.nodes.size(); ++s) {
            e.y_k.add_jump(pv.times[s], S.Y[pv.nodes[s]]);
            e.y_ref.add_jump(pv.times[s], R.Y[pv.nodes[s]]);
        }
        e.terminal_k = S.Y[leaf];
        e.terminal_ref = R.Y[leaf];
        for (std::size_t o = 0; o < 7; ++o) {
            e.angle_k[o] = bk.angle[o][leaf];
            e.angle_ref[o] = br.angle[o][leaf];
        }
        e.n_bracket = bk.angle[3][leaf];
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<ScenarioEval> evaluate_lattice(const std::string& problem, int k,
                                           const ExperimentConfig& cfg, double* y0_out) {
    ProblemSetup s = make_problem(problem, cfg);
    if (!s.gen.is_zero() || s.jump_lambda > 0 || s.deterministic || !s.g_of_x)
        throw std::invalid_argument(
            "evaluate_lattice: sampling mode needs a driver-only (f = 0, no jump) problem");
    Lattice lat(k, cfg.T, s.g_of_x);
    if (y0_out) *y0_out = lat.y0();
    double h = lat.h(), T = cfg.T, dt = T / k;
    double lam = cfg.lambda;

    std::vector<ScenarioEval> out;
    out.reserve(cfg.n_paths);
    for (int path = 0; path < cfg.n_paths; ++path) {
        SplitMix64 rng = SplitMix64::stream(cfg.seed, static_cast<std::uint64_t>(path));
        ScenarioEval e;
        e.prob = 1.0 / cfg.n_paths;
        int j = 0;
        e.y_k = StepPath::constant(lat.value(0, 0), T);
        e.y_ref = StepPath::constant(reference_value(problem, 0, 0, T, lam), T);
        for (int i = 0; i < k; ++i) {
            double t = i * dt, x = lat.x(i, j);
            double z = lat.z(i, j);
            double dYu = lat.value(i + 1, j + 1) - lat.value(i, j);
            double dYd = lat.value(i + 1, j) - lat.value(i, j);
            e.angle_k[0] += 0.5 * (dYu * dYu + dYd * dYd);
            e.angle_k[1] += z * z * h * h;
            e.angle_k[3] += 0.5 * ((dYu - z * h) * (dYu - z * h) + (dYd + z * h) * (dYd + z * h));
            e.angle_k[4] += 0.5 * h * (dYu - dYd);
            e.angle_k[6] += 0.5 * (dYu * (dYu - z * h) + dYd * (dYd + z * h));

            double u0 = reference_value(problem, t, x, T, lam);
            double dUu = reference_value(problem, t + dt, x + h, T, lam) - u0;
            double dUd = reference_value(problem, t + dt, x - h, T, lam) - u0;
            double zr = reference_derivative(problem, t, x, T);
            e.angle_ref[0] += 0.5 * (dUu * dUu + dUd * dUd);
            e.angle_ref[1] += zr * zr * h * h;
            e.angle_ref[3] +=
                0.5 * ((dUu - zr * h) * (dUu - zr * h) + (dUd + zr * h) * (dUd + zr * h));
            e.angle_ref[4] += 0.5 * h * (dUu - dUd);
            e.angle_ref[6] += 0.5 * (dUu * (dUu - zr * h) + dUd * (dUd + zr * h));

            j += rng.coin() ? 1 : 0;
            if (i + 1 < k) {
                e.y_k.add_jump((i + 1) * dt, lat.value(i + 1, j));
                e.y_ref.add_jump((i + 1) * dt,
                                 reference_value(problem, (i + 1) * dt, lat.x(i + 1, j), T, lam));
            }
        }
        e.terminal_k = lat.value(k, j);
        e.terminal_ref = reference_value(problem, T, lat.x(k, j), T, lam);
        e.n_bracket = e.angle_k[3];
        out.push_back(std::move(e));
    }
    return out;
}

DistanceSummary distance_estimators(const std::vector<ScenarioEval>& scenarios, double window) {
    DistanceSummary d;
    if (scenarios.empty()) throw std::invalid_argument("distance_estimators: no scenarios");
    double wsum = 0;
    for (const ScenarioEval& e : scenarios) {
        wsum += e.prob;
        double j1 = std::min(1.0, j1_distance(e.y_k, e.y_ref, window));
        d.j1_y_mean += e.prob * j1 * j1;
        double dg = e.terminal_k - e.terminal_ref;
        d.terminal_l2 += e.prob * dg * dg;
        for (std::size_t o = 0; o < 7; ++o)
            d.bracket_l1[o] += e.prob * std::fabs(e.angle_k[o] - e.angle_ref[o]);
        d.n_mean += e.prob * e.n_bracket;
    }
    if (std::fabs(wsum - 1.0) > 1e-8)
        throw std::invalid_argument("distance_estimators: scenario probabilities do not sum to 1");
    return d;
}

ExperimentResult stability_experiment(const ExperimentConfig& cfg) {
    ExperimentResult res;
    res.cfg = cfg;
    ProblemSetup setup = make_problem(cfg.problem, cfg);

    // certificate at the worst jump of A across the exact instances
    double phi_max = 0;
    std::vector<StandardData> exact_data;
    std::vector<int> exact_k;
    for (int k : cfg.k_list) {
        if (!needs_sampling(cfg.problem, k, cfg)) {
            exact_data.push_back(build_problem_data(cfg.problem, k, cfg));
            exact_k.push_back(k);
            phi_max = std::max(phi_max, exact_data.back().phi);
        }
    }
    res.cert = make_certificate(cfg.beta_hat, phi_max);
    res.certified = res.cert.passes_quarter;
    double beta = res.certified ? cfg.beta_hat : 0.0;

    res.gap_table.row_labels.clear();
    res.gap_table.col_labels.clear();
    for (int p = 1; p <= cfg.p_max; ++p) res.gap_table.col_labels.push_back(p);

    std::size_t ei = 0;
    for (int k : cfg.k_list) {
        KRow row;
        row.k = k;
        if (needs_sampling(cfg.problem, k, cfg)) {
            row.exact = false;
            auto sc = evaluate_lattice(cfg.problem, k, cfg, &row.y0);
            row.dist = distance_estimators(sc, cfg.T);
            // f = 0: the first Picard step already is the fixed point
            row.picard_gap.assign(cfg.p_max, 0.0);
        } else {
            const StandardData& data = exact_data[ei++];
            SolveOptions opts;
            opts.tol = std::min(cfg.tol, 1e-11);
            opts.max_p = cfg.p_max + 50;
            opts.beta = beta;
            opts.conv = cfg.convention;
            bool keep = !setup.gen.is_zero();
            SolveResult sr = solve(data, res.certified ? &res.cert : nullptr, opts, keep);
            row.y0 = sr.S.Y[0];
            row.first_iterate_norm_sq = sr.first_iterate_norm_sq;
            row.picard_gap.assign(cfg.p_max, 0.0);
            if (keep) {
                for (int p = 1; p <= cfg.p_max && p <= static_cast<int>(sr.iterates.size()); ++p)
                    row.picard_gap[p - 1] =
                        std::sqrt(star_norm(sr.S.diff(sr.iterates[p - 1]), data, beta).total());
            }
            auto sc = evaluate_exact(data, cfg.problem, sr.S);
            row.dist = distance_estimators(sc, cfg.T);
            GammaStats gs = gamma_functional(data, sr.S);
            row.gamma_mean = gs.mean;
            row.gamma_moment = gs.moment_1_plus_delta;
        }
        res.gap_table.row_labels.push_back(k);
        res.gap_table.cells.push_back(row.picard_gap);
        res.rows.push_back(std::move(row));
    }
    res.gap_table.row_limits = std::vector<double>(res.rows.size(), 0.0);
    res.gap_table.metric = "star-norm gap";
    if (res.rows.size() >= 3 && cfg.p_max >= 3)
        res.mo = moore_osgood_a(res.gap_table, 1e-4);
    res.y_ref_0 = cfg.problem == "ode-limit"
                      ? ode_backward(setup.gen, 0.0, cfg.T, setup.xi_const)
                      : reference_value(cfg.problem, 0.0, 0.0, cfg.T, cfg.lambda, setup.xi_const);
    return res;
}

}  // namespace bsdelab
