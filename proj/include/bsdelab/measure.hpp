#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bsdelab/skorokhod.hpp"
#include "bsdelab/step_path.hpp"

namespace bsdelab {

/// Continuous piecewise-linear function on [0, end], constant after its last
/// knot.  Used for integrands that a step path cannot represent exactly
/// (e.g. x or x AND 1).
class PwlPath {
public:
    PwlPath(std::vector<std::pair<double, double>> knots);
    double at(double x) const;
    double sup_abs(double upto) const;
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

private:
    std::vector<std::pair<double, double>> knots_;  // (x, value), x strictly increasing
};

/// Integrand against a finite measure: a cadlag step path or an exact
/// piecewise-linear function.
using Integrand = std::variant<StepPath, PwlPath>;

double integrand_at(const Integrand& a, double x);
double integrand_sup(const Integrand& a, double upto);

/// Finite Borel measure on [0, infinity): atomic part plus an absolutely
/// continuous part with piecewise-linear distribution function.
class FiniteMeasure {
public:
    FiniteMeasure() = default;

    /// Atomic measure.  Atoms at 0 are rejected unless allow_zero_atom is set
    /// (sparse discretization places mass at the left knot 0 and needs it).
    static FiniteMeasure atomic(std::vector<std::pair<double, double>> atoms,
                                bool allow_zero_atom = false);
    /// Lebesgue measure restricted to [0, b].
    static FiniteMeasure lebesgue(double b);
    /// Absolutely continuous part from breakpoints (t, F(t)), F(0) = 0.
    static FiniteMeasure piecewise_linear(std::vector<std::pair<double, double>> knots);
    static FiniteMeasure mixed(std::vector<std::pair<double, double>> atoms,
                               std::vector<std::pair<double, double>> plinear_knots,
                               bool allow_zero_atom = false);

    const std::vector<std::pair<double, double>>& atoms() const { return atoms_; }
    const std::vector<std::pair<double, double>>& plinear() const { return pl_; }

    double total_mass() const;
    double cdf(double t) const;       // F(t), atoms at t included
    double cdf_left(double t) const;  // F(t-)
    double atom_mass_at(double t) const;
    /// Mass of an interval with the given endpoint inclusions.
    double mass_interval(double lo, double hi, bool incl_lo, bool incl_hi) const;
    double support_end() const;
    bool is_atomless() const { return atoms_.empty(); }

    /// "atoms: (t,m) ..." / "plinear: (t,F) ..." text record, 17 digits.
    std::string to_text() const;
    static FiniteMeasure from_text(const std::string& text);

private:
    std::vector<std::pair<double, double>> atoms_;  // (location, mass), sorted
    std::vector<std::pair<double, double>> pl_;     // (t, F_c(t)), starts at (0, 0)
};

/// Kolmogorov-Smirnov distance, sup over [0, infinity] of |F_mu - F_nu|; the
/// extended point at infinity compares total masses.
double ks_distance(const FiniteMeasure& mu, const FiniteMeasure& nu);

/// Same sup restricted to [0, N] (left limits included), without the
/// infinity-point term.
double ks_distance_window(const FiniteMeasure& mu, const FiniteMeasure& nu, double window);

/// sup over all subintervals of [0, N] (all four endpoint-inclusion types) of
/// |mu(I) - nu(I)|.
double interval_sup_distance(const FiniteMeasure& mu, const FiniteMeasure& nu, double window);

/// Exact Stieltjes integral of alpha over [0, t].
double integrate(const Integrand& alpha, const FiniteMeasure& mu, double upto);

/// t -> integrate(alpha, mu, t) as a step path; continuous mass is folded
/// into steps of size <= mesh (in the value scale).
StepPath running_integral(const Integrand& alpha, const FiniteMeasure& mu, double window,
                          double mesh = 1e-3);

/// Atomic measure placing each cell's mass mu([t_{i-1}, t_i)) at the left
/// knot t_{i-1}.
FiniteMeasure discretize_sparse(const FiniteMeasure& mu, const SparsePartition& P);

/// Fold a distribution function into a step path on [0, window]; continuous
/// pieces are subdivided into rises of at most mesh.
StepPath cdf_step_path(const FiniteMeasure& mu, double window, double mesh = 1e-3);

/// Maximum atom mass of either measure on [0, window] (the jump term of the
/// interval-sup sandwich).
double max_atom_mass(const FiniteMeasure& mu, const FiniteMeasure& nu, double window);

}  // namespace bsdelab
