#include "bsdelab/step_approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace bsdelab {

namespace {

struct CellMoments {
    double mass = 0;
    double m1 = 0;  // integral of target
    double m2 = 0;  // integral of target^2
};

/// Exact mu-moments of the target over [lo, hi) (hi included for the final
/// cell): atoms evaluated pointwise, continuous part integrated in closed
/// form on each linearity piece.
CellMoments cell_moments(const Integrand& target, const FiniteMeasure& mu, double lo, double hi,
                         bool incl_hi) {
    CellMoments out;
    for (const auto& [loc, m] : mu.atoms()) {
        if (loc < lo || loc > hi || (loc == hi && !incl_hi)) continue;
        double v = integrand_at(target, loc);
        if (!std::isfinite(v)) throw std::runtime_error("l2_step_approximation: target not finite at an atom");
        out.mass += m;
        out.m1 += v * m;
        out.m2 += v * v * m;
    }
    // cut points: pl breakpoints and target breakpoints inside (lo, hi)
    std::vector<double> cuts{lo, hi};
    for (const auto& [t, F] : mu.plinear())
        if (t > lo && t < hi) cuts.push_back(t);
    if (std::holds_alternative<StepPath>(target)) {
        const StepPath& s = std::get<StepPath>(target);
        for (std::size_t j = 0; j < s.jump_count(); ++j)
            if (s.jump_time(j) > lo && s.jump_time(j) < hi) cuts.push_back(s.jump_time(j));
    } else {
        for (const auto& [x, v] : std::get<PwlPath>(target).knots())
            if (x > lo && x < hi) cuts.push_back(x);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        double dmass = mu.cdf_left(b) - mu.cdf(a);
        // the cdf difference still counts atoms strictly inside (a, b); drop them
        for (const auto& [loc, m] : mu.atoms())
            if (loc > a && loc < b) dmass -= m;
        if (dmass <= 0) continue;
        double rho = dmass / (b - a);
        if (std::holds_alternative<StepPath>(target)) {
            double v = std::get<StepPath>(target).at1(std::nextafter(a, b));
            out.mass += dmass;
            out.m1 += v * dmass;
            out.m2 += v * v * dmass;
        } else {
            double va = std::get<PwlPath>(target).at(a);
            double vb = std::get<PwlPath>(target).at(b);
            double q = (vb - va) / (b - a);
            // v(t) = va + q (t - a); trapezoid / Simpson exact for degree <= 2
            double mid = 0.5 * (va + vb);
            double i1 = mid * (b - a);
            double i2 = (va * va + va * vb + vb * vb) / 3.0 * (b - a);
            (void)q;
            out.mass += dmass;
            out.m1 += rho * i1;
            out.m2 += rho * i2;
        }
    }
    return out;
}

double quantize(double v, int bits) {
    double s = std::ldexp(1.0, bits);
    return std::round(v * s) / s;
}

}  // namespace

StepApproxResult l2_step_approximation(const Integrand& target, const FiniteMeasure& mu,
                                       double eps) {
    if (eps <= 0) throw std::invalid_argument("l2_step_approximation: eps must be positive");
    double window = mu.support_end();
    if (window <= 0) window = 1.0;

    if (std::holds_alternative<StepPath>(target)) {
        // a step path already is a (dyadic-valued) step path: exact, error 0
        StepApproxResult r{std::get<StepPath>(target), 0.0, 0};
        return r;
    }

    for (int level = 0; level <= 26; ++level) {
        int ncells = 1 << level;
        double h = window / ncells;
        StepPath s = StepPath::constant(0.0, window);
        double err = 0;
        for (int i = 0; i < ncells; ++i) {
            double lo = i * h, hi = (i + 1) * h;
            CellMoments cm = cell_moments(target, mu, lo, hi, i + 1 == ncells);
            double c = cm.mass > 0 ? cm.m1 / cm.mass : integrand_at(target, lo);
            c = quantize(c, level + 12);
            err += cm.m2 - 2 * c * cm.m1 + c * c * cm.mass;
            if (i == 0) {
                s = StepPath::constant(c, window);
            } else {
                s.add_jump(lo, c);
            }
        }
        if (err < eps * eps) return {s, std::max(err, 0.0), level};
    }
    throw std::runtime_error("l2_step_approximation: error budget not met at maximum refinement");
}

}  // namespace bsdelab
