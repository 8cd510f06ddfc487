#pragma once

#include <string>
#include <vector>

#include "bsdelab/measure.hpp"
#include "bsdelab/moore_osgood.hpp"

namespace bsdelab {

/// Per-criterion trace of the weak-convergence equivalence: one value per
/// member of the sequence and the last index violating the tolerance
/// (-1 when none does).
struct WeakConvCriterion {
    std::string name;
    std::vector<double> values;
    int last_violation = -1;
    bool pass = false;
};

struct WeakConvReport {
    bool limit_atomless = true;  // hypothesis flag; criteria still evaluated when false
    std::vector<WeakConvCriterion> criteria;  // b, c, d, e, mass, tightness
    bool all_pass = false;

    const WeakConvCriterion& criterion(const std::string& name) const;
};

/// Evaluates, for each measure of the sequence, the equivalent convergence
/// criteria: (b) pointwise on a dense grid, (c) windowed J1 of distribution
/// functions, (d) locally uniform, (e) interval sup, plus mass boundedness
/// and a tightness proxy (mass outside [0, tight_window]).
WeakConvReport weak_convergence_report(const std::vector<FiniteMeasure>& seq,
                                       const FiniteMeasure& limit, double window,
                                       double tight_window, double tol);

struct UniformWeakGap {
    double exact_gap = 0;      // sup over the family of |int alpha dmu_k - int alpha dmu_inf|
    double certificate = 0;    // constructive upper bound from the proof decomposition
    double zeta = 0;           // sparsity used by the certificate
    double tail_term = 0;
    double oscillation_term = 0;
    double interval_term = 0;
};

/// Exact uniform integral gap over a finite family together with the proof's
/// constructive certificate (tail mass + sparse-discretization oscillation +
/// interval-sup term); certificate >= exact gap always.
UniformWeakGap uniform_weak_gap(const std::vector<Integrand>& family, const FiniteMeasure& mu_k,
                                const FiniteMeasure& mu_inf, double window, double eps);

struct DoublyIndexedGap {
    DoubleTable gamma;           // gamma_{k,m} = |int alpha_k dmu_m - int alpha_inf dmu_inf|
    MooreOsgoodVerdict verdict;  // Moore-Osgood B on the table
    bool atomless_violated = false;
    double joint_estimate = 0;
};

DoublyIndexedGap doubly_indexed_gap(const std::vector<Integrand>& alphas,
                                    const Integrand& alpha_inf,
                                    const std::vector<FiniteMeasure>& mus,
                                    const FiniteMeasure& mu_inf, double tol = 0.05);

}  // namespace bsdelab
