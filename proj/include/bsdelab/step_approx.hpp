#pragma once

#include "bsdelab/measure.hpp"
#include "bsdelab/step_path.hpp"

namespace bsdelab {

struct StepApproxResult {
    StepPath approx;
    double error_sq = 0;  // recomputed exact Stieltjes error, integral of (target - approx)^2 dmu
    int level = 0;        // dyadic refinement level used
};

/// L2(mu) step approximation of a bounded integrand with dyadic cell
/// endpoints and dyadic values: truncate to the window, then project each
/// dyadic cell onto its mu-weighted mean, quantized; the mesh doubles until
/// the exact recomputed error is below eps^2.
StepApproxResult l2_step_approximation(const Integrand& target, const FiniteMeasure& mu,
                                       double eps);

}  // namespace bsdelab
