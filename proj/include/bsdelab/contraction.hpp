#pragma once

#include <string>
#include <vector>

namespace bsdelab {

/// Pi_star(gamma, delta, Phi) = 8/gamma + 9/delta + 9 delta e^{(delta-gamma)Phi} / (gamma (delta-gamma)).
double pi_star(double gamma, double delta, double phi);

/// Pi_tilde_star(delta, Phi) = 17 + 9 e^{delta Phi}.
double pi_tilde_star(double delta, double phi);

struct MStarResult {
    double value = 0;
    double gamma = 0;               // minimizer of gamma -> pi_star(gamma, beta, phi)
    bool delta_boundary_optimal = false;  // 2-D cross-check: delta = beta optimal on the grid
};

/// M_star(beta, Phi) = inf over 0 < gamma < delta <= beta of Pi_star, attained
/// at delta = beta; minimized by golden-section refinement of a coarse grid
/// and cross-checked on a 2-D grid.
MStarResult m_star(double beta, double phi);

struct ContractionCertificate {
    double beta_hat = 0;
    double phi = 0;
    double gamma = 0;
    double m_star = 0;
    bool passes_quarter = false;

    std::string to_json() const;
    static ContractionCertificate from_json(const std::string& text);
};

ContractionCertificate make_certificate(double beta_hat, double phi);

struct KStarResult {
    int index = -1;  // first index with m_star(beta_hat, phi_k) < 1/4
    std::vector<ContractionCertificate> certificates;
};

/// Smallest index in the Phi sequence whose certificate passes the 1/4 test;
/// verifies that every later provided index passes as well.  Throws when no
/// index qualifies.
KStarResult select_k_star(const std::vector<double>& phi_seq, double beta_hat);

/// 4^{1-p} * first-iterate norm squared.
double picard_tail_bound(double first_iterate_norm_sq, int p);

/// Pi_tilde_star(beta, Phi) * ||xi||^2 + M_star(beta, Phi) * ||f(.,0,0,0)/alpha||^2.
double first_iterate_bound(double beta_hat, double phi, double xi_norm_sq, double f0_norm_sq);

}  // namespace bsdelab
