#include "bsdelab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bsdelab {

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::string report_csv(const ExperimentResult& res) {
    std::ostringstream os;
    os << res.gap_table.to_csv() << "\n";
    os << "k,exact,y0,j1_y_mean,terminal_l2,n_mean";
    for (std::size_t o = 0; o < 7; ++o) os << ",bracket_l1_" << BracketSet::angle_names()[o];
    os << ",gamma_mean,gamma_moment\n";
    for (const KRow& r : res.rows) {
        os << r.k << ',' << (r.exact ? 1 : 0) << ',' << fmt(r.y0) << ',' << fmt(r.dist.j1_y_mean)
           << ',' << fmt(r.dist.terminal_l2) << ',' << fmt(r.dist.n_mean);
        for (std::size_t o = 0; o < 7; ++o) os << ',' << fmt(r.dist.bracket_l1[o]);
        os << ',' << fmt(r.gamma_mean) << ',' << fmt(r.gamma_moment) << '\n';
    }
    return os.str();
}

std::string report_json(const ExperimentResult& res) {
    nlohmann::json j;
    j["config"] = res.cfg.to_text();
    j["reference_y0"] = res.y_ref_0;
    j["certified"] = res.certified;
    j["certificate"] = nlohmann::json::parse(res.cert.to_json());
    j["moore_osgood"] = {{"variant", res.mo.variant},
                         {"pass", res.mo.pass},
                         {"cond_i", res.mo.cond_i},
                         {"cond_ii", res.mo.cond_ii},
                         {"joint_estimate", res.mo.joint_estimate},
                         {"detail", res.mo.detail}};
    nlohmann::json rows = nlohmann::json::array();
    for (const KRow& r : res.rows) {
        nlohmann::json row;
        row["k"] = r.k;
        row["exact"] = r.exact;
        row["y0"] = r.y0;
        row["picard_gap"] = r.picard_gap;
        row["j1_y_mean"] = r.dist.j1_y_mean;
        row["terminal_l2"] = r.dist.terminal_l2;
        row["n_mean"] = r.dist.n_mean;
        row["bracket_l1"] = r.dist.bracket_l1;
        row["gamma_mean"] = r.gamma_mean;
        row["gamma_moment"] = r.gamma_moment;
        rows.push_back(row);
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

std::string report_txt(const ExperimentResult& res) {
    std::ostringstream os;
    os << "problem " << res.cfg.problem << ", reference Y0 = " << fmt(res.y_ref_0) << "\n";
    os << "certificate: beta_hat=" << fmt(res.cert.beta_hat) << " phi=" << fmt(res.cert.phi)
       << " m_star=" << fmt(res.cert.m_star)
       << (res.certified ? " (passes 1/4 test)" : " (not certified)") << "\n";
    for (const KRow& r : res.rows)
        os << "k=" << r.k << (r.exact ? " exact" : " sampled") << " Y0=" << fmt(r.y0)
           << " |Y0-ref|=" << fmt(std::fabs(r.y0 - res.y_ref_0))
           << " j1=" << fmt(r.dist.j1_y_mean) << " termL2=" << fmt(r.dist.terminal_l2)
           << " <N>=" << fmt(r.dist.n_mean) << "\n";
    os << "moore-osgood " << res.mo.variant << ": " << (res.mo.pass ? "PASS" : "FAIL")
       << " joint=" << fmt(res.mo.joint_estimate) << "\n";
    return os.str();
}

ReportFiles emit_report(const ExperimentResult& res, const std::string& base_path) {
    ReportFiles f{base_path + ".csv", base_path + ".json", base_path + ".txt"};
    auto write = [](const std::string& path, const std::string& body) {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("emit_report: cannot open " + path);
        os << body;
        if (!os) throw std::runtime_error("emit_report: write failed for " + path);
    };
    write(f.csv_path, report_csv(res));
    write(f.json_path, report_json(res));
    write(f.txt_path, report_txt(res));
    return f;
}

}  // namespace bsdelab
