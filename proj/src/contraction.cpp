#include "bsdelab/contraction.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bsdelab {

double pi_star(double gamma, double delta, double phi) {
    if (!(gamma > 0) || !(delta > 0) || phi < 0)
        throw std::invalid_argument("pi_star: need gamma, delta > 0 and phi >= 0");
    if (!(gamma < delta)) throw std::invalid_argument("pi_star: need gamma < delta");
    return 8.0 / gamma + 9.0 / delta +
           9.0 * delta * std::exp((delta - gamma) * phi) / (gamma * (delta - gamma));
}

double pi_tilde_star(double delta, double phi) {
    if (delta < 0 || phi < 0) throw std::invalid_argument("pi_tilde_star: nonnegative args required");
    return 17.0 + 9.0 * std::exp(delta * phi);
}

MStarResult m_star(double beta, double phi) {
    if (!(beta > 0) || phi < 0) throw std::invalid_argument("m_star: need beta > 0, phi >= 0");
    auto f = [&](double g) { return pi_star(g, beta, phi); };

    // coarse scan: log-spaced near 0 plus a linear sweep of (0, beta)
    const int NL = 60, NU = 400;
    double best_g = beta / 2, best_v = f(best_g);
    auto consider = [&](double g) {
        if (!(g > 0) || !(g < beta)) return;
        double v = f(g);
        if (v < best_v) {
            best_v = v;
            best_g = g;
        }
    };
    for (int i = 1; i <= NL; ++i) consider(beta * std::pow(2.0, -i * 0.5));
    for (int i = 1; i < NU; ++i) consider(beta * i / static_cast<double>(NU));

    // golden-section refinement around the best coarse candidate
    double lo = std::max(best_g - beta / NU, beta * 1e-12);
    double hi = std::min(best_g + beta / NU, beta * (1 - 1e-12));
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-14 * beta; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    double g = 0.5 * (a + b), v = f(g);
    if (v > best_v + 1e-9 * (1 + std::fabs(best_v)))
        throw std::runtime_error("m_star: golden-section bracket failed to converge");
    if (v < best_v) {
        best_v = v;
        best_g = g;
    }

    // 2-D cross-check over the cone 0 < gamma < delta <= beta: the infimum
    // should sit on the boundary delta = beta up to grid resolution
    MStarResult res;
    res.value = best_v;
    res.gamma = best_g;
    double grid_best = 1e300;
    double grid_best_delta = 0;
    const int ND = 48;
    for (int di = 1; di <= ND; ++di) {
        double d = beta * di / static_cast<double>(ND);
        for (int gi = 1; gi < 64; ++gi) {
            double gg = d * gi / 64.0;
            if (!(gg > 0) || !(gg < d)) continue;
            double vv = pi_star(gg, d, phi);
            if (vv < grid_best) {
                grid_best = vv;
                grid_best_delta = d;
            }
        }
    }
    res.delta_boundary_optimal =
        std::fabs(grid_best_delta - beta) <= beta / ND + 1e-12 && best_v <= grid_best + 1e-9;
    return res;
}

std::string ContractionCertificate::to_json() const {
    nlohmann::json j;
    j["beta_hat"] = beta_hat;
    j["phi"] = phi;
    j["gamma"] = gamma;
    j["m_star"] = m_star;
    j["passes_quarter"] = passes_quarter;
    return j.dump(2);
}

ContractionCertificate ContractionCertificate::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ContractionCertificate c;
    c.beta_hat = j.at("beta_hat").get<double>();
    c.phi = j.at("phi").get<double>();
    c.gamma = j.at("gamma").get<double>();
    c.m_star = j.at("m_star").get<double>();
    c.passes_quarter = j.at("passes_quarter").get<bool>();
    return c;
}

ContractionCertificate make_certificate(double beta_hat, double phi) {
    MStarResult m = m_star(beta_hat, phi);
    ContractionCertificate c;
    c.beta_hat = beta_hat;
    c.phi = phi;
    c.gamma = m.gamma;
    c.m_star = m.value;
    c.passes_quarter = m.value < 0.25;
    return c;
}

KStarResult select_k_star(const std::vector<double>& phi_seq, double beta_hat) {
    KStarResult out;
    for (std::size_t i = 0; i < phi_seq.size(); ++i) {
        ContractionCertificate c = make_certificate(beta_hat, phi_seq[i]);
        out.certificates.push_back(c);
        if (out.index < 0 && c.passes_quarter) out.index = static_cast<int>(i);
    }
    if (out.index < 0)
        throw std::runtime_error("select_k_star: no index qualifies within the provided sequence");
    for (std::size_t i = static_cast<std::size_t>(out.index); i < out.certificates.size(); ++i)
        if (!out.certificates[i].passes_quarter)
            throw std::runtime_error("select_k_star: later index fails the 1/4 test (Phi not "
                                     "nonincreasing toward 0?)");
    return out;
}

double picard_tail_bound(double first_iterate_norm_sq, int p) {
    if (p < 1) throw std::invalid_argument("picard_tail_bound: need p >= 1");
    if (first_iterate_norm_sq < 0)
        throw std::invalid_argument("picard_tail_bound: norm squared must be >= 0");
    return std::pow(4.0, 1.0 - p) * first_iterate_norm_sq;
}

double first_iterate_bound(double beta_hat, double phi, double xi_norm_sq, double f0_norm_sq) {
    if (xi_norm_sq < 0 || f0_norm_sq < 0)
        throw std::invalid_argument("first_iterate_bound: inputs must be >= 0");
    double out = pi_tilde_star(beta_hat, phi) * xi_norm_sq;
    if (f0_norm_sq > 0) out += m_star(beta_hat, phi).value * f0_norm_sq;
    return out;
}

}  // namespace bsdelab
