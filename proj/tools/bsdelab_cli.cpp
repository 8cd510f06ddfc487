#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bsdelab/experiment.hpp"
#include "bsdelab/measure.hpp"
#include "bsdelab/report.hpp"
#include "bsdelab/skorokhod.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

int run(int argc, char** argv) {
    CLI::App app{"Scenario-tree BSDE laboratory: contraction constants, Picard solves, "
                 "convergence experiments, and path/measure metrics"};
    app.require_subcommand(1);

    // constants
    auto* constants = app.add_subcommand("constants", "Contraction-constant queries");
    double beta = 300, phi = 0;
    std::vector<double> pi_args;  // gamma delta phi
    std::vector<double> pit_args; // delta phi
    std::vector<double> phi_seq;
    constants->add_option("--beta", beta, "weight exponent beta");
    constants->add_option("--phi", phi, "jump bound Phi of A");
    constants->add_option("--pi-star", pi_args, "gamma delta phi -> Pi_star")->expected(3);
    constants->add_option("--pi-tilde", pit_args, "delta phi -> Pi_tilde_star")->expected(2);
    constants->add_option("--k-star", phi_seq, "Phi sequence; prints the first passing index")
        ->expected(-1);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Solve one standard-data instance");
    std::string data_path, solve_out;
    double solve_tol = 1e-10, solve_beta = 0;
    int max_p = 60;
    std::string conv_name = "Y_left";
    solve_cmd->add_option("--data", data_path, "standard data JSON file")->required();
    solve_cmd->add_option("--out", solve_out, "write the solution table CSV here");
    solve_cmd->add_option("--tol", solve_tol, "successive-gap tolerance");
    solve_cmd->add_option("--max-p", max_p, "Picard iteration cap");
    solve_cmd->add_option("--beta", solve_beta, "gap-norm weight");
    solve_cmd->add_option("--convention", conv_name, "Y_left or Y_right");

    // experiment
    auto* exp_cmd = app.add_subcommand("experiment", "Doubly-indexed convergence run");
    std::string config_path, report_base = "report";
    exp_cmd->add_option("--config", config_path, "key=value config file")->required();
    exp_cmd->add_option("--out", report_base, "report base path (.csv/.json/.txt)");

    // metrics
    auto* metrics = app.add_subcommand("metrics", "Path and measure distances on files");
    std::vector<std::string> j1_files, sup_files, ks_files, isup_files, wp_files;
    double window = 1, zeta = 0.1;
    metrics->add_option("--j1", j1_files, "two step-path files")->expected(2);
    metrics->add_option("--sup", sup_files, "two step-path files")->expected(2);
    metrics->add_option("--ks", ks_files, "two measure files")->expected(2);
    metrics->add_option("--interval-sup", isup_files, "two measure files")->expected(2);
    metrics->add_option("--wprime", wp_files, "one step-path file")->expected(1);
    metrics->add_option("--window", window, "time window N");
    metrics->add_option("--zeta", zeta, "sparsity for wprime");

    // mo-check
    auto* mo_cmd = app.add_subcommand("mo-check", "Moore-Osgood verdict for a CSV table");
    std::string table_path, variant = "A";
    double mo_tol = 0.05;
    mo_cmd->add_option("--table", table_path, "CSV table (header p..., rows k=...)")->required();
    mo_cmd->add_option("--variant", variant, "A or B");
    mo_cmd->add_option("--tol", mo_tol, "verdict tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // usage errors exit 1 regardless of CLI11's own code
    }

    if (constants->parsed()) {
        if (!pi_args.empty()) {
            std::cout << "pi_star=" << bsdelab::pi_star(pi_args[0], pi_args[1], pi_args[2]) << "\n";
            return 0;
        }
        if (!pit_args.empty()) {
            std::cout << "pi_tilde_star=" << bsdelab::pi_tilde_star(pit_args[0], pit_args[1])
                      << "\n";
            return 0;
        }
        if (!phi_seq.empty()) {
            bsdelab::KStarResult ks = bsdelab::select_k_star(phi_seq, beta);
            std::cout << "k_star_index=" << ks.index << "\n"
                      << ks.certificates[ks.index].to_json() << "\n";
            return 0;
        }
        bsdelab::ContractionCertificate c = bsdelab::make_certificate(beta, phi);
        std::cout << c.to_json() << "\n";
        return c.passes_quarter ? 0 : 2;
    }

    if (solve_cmd->parsed()) {
        bsdelab::StandardData data = bsdelab::StandardData::from_json(slurp(data_path));
        bsdelab::SolveOptions opts;
        opts.tol = solve_tol;
        opts.max_p = max_p;
        opts.beta = solve_beta;
        if (conv_name == "Y_right")
            opts.conv = bsdelab::Convention::Y_right;
        else if (conv_name != "Y_left")
            throw std::runtime_error("convention must be Y_left or Y_right");
        bsdelab::SolveResult sr = bsdelab::solve(data, nullptr, opts);
        std::string csv = bsdelab::solution_to_csv(sr.S, data);
        if (!solve_out.empty()) {
            std::ofstream os(solve_out, std::ios::binary);
            if (!os) throw std::runtime_error("cannot open " + solve_out);
            os << csv;
        } else {
            std::cout << csv;
        }
        std::cerr << "iterations=" << sr.iterations << " converged=" << sr.converged
                  << " Y0=" << sr.S.Y[0] << "\n";
        return sr.converged ? 0 : 2;
    }

    if (exp_cmd->parsed()) {
        bsdelab::ExperimentConfig cfg = bsdelab::ExperimentConfig::from_text(slurp(config_path));
        bsdelab::ExperimentResult res = bsdelab::stability_experiment(cfg);
        bsdelab::emit_report(res, report_base);
        std::cout << bsdelab::report_txt(res);
        return res.mo.pass ? 0 : 2;
    }

    if (metrics->parsed()) {
        if (!j1_files.empty()) {
            auto a = bsdelab::StepPath::from_text(slurp(j1_files[0]));
            auto b = bsdelab::StepPath::from_text(slurp(j1_files[1]));
            std::cout << "j1=" << bsdelab::j1_distance(a, b, window) << "\n";
        }
        if (!sup_files.empty()) {
            auto a = bsdelab::StepPath::from_text(slurp(sup_files[0]));
            auto b = bsdelab::StepPath::from_text(slurp(sup_files[1]));
            std::cout << "sup=" << bsdelab::sup_distance(a, b, window) << "\n";
        }
        if (!ks_files.empty()) {
            auto m = bsdelab::FiniteMeasure::from_text(slurp(ks_files[0]));
            auto n = bsdelab::FiniteMeasure::from_text(slurp(ks_files[1]));
            std::cout << "ks=" << bsdelab::ks_distance(m, n) << "\n";
        }
        if (!isup_files.empty()) {
            auto m = bsdelab::FiniteMeasure::from_text(slurp(isup_files[0]));
            auto n = bsdelab::FiniteMeasure::from_text(slurp(isup_files[1]));
            std::cout << "interval_sup=" << bsdelab::interval_sup_distance(m, n, window) << "\n";
        }
        if (!wp_files.empty()) {
            auto a = bsdelab::StepPath::from_text(slurp(wp_files[0]));
            std::cout << "wprime=" << bsdelab::w_prime(a, window, zeta) << "\n";
        }
        return 0;
    }

    if (mo_cmd->parsed()) {
        bsdelab::DoubleTable t = bsdelab::DoubleTable::from_csv(slurp(table_path));
        bsdelab::MooreOsgoodVerdict v = variant == "B" ? bsdelab::moore_osgood_b(t, mo_tol)
                                                       : bsdelab::moore_osgood_a(t, mo_tol);
        std::cout << "variant=" << v.variant << " pass=" << (v.pass ? "PASS" : "FAIL")
                  << " cond_i=" << v.cond_i << " cond_ii=" << v.cond_ii
                  << " joint=" << v.joint_estimate << " detail=" << v.detail << "\n";
        return v.pass ? 0 : 2;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
