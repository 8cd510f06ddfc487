#pragma once

#include <string>
#include <vector>

#include "bsdelab/step_path.hpp"

namespace bsdelab {

/// Knot times 0 = t_0 < ... < t_kappa = N whose interior gaps all exceed zeta
/// (the last gap t_kappa - t_{kappa-1} is unconstrained).
struct SparsePartition {
    std::vector<double> knots;
    double zeta = 0;
    double window = 0;

    std::size_t cells() const { return knots.size() - 1; }
    void validate() const;  // throws on a violated invariant
};

/// Skorokhod J1 distance between step paths on [0, N]:
/// inf over increasing bijections lambda of max(sup|lambda(t)-t|, sup|a(lambda(t))-b(t)|),
/// computed exactly by dynamic programming over order-preserving matchings of
/// jump times.
double j1_distance(const StepPath& a, const StepPath& b, double window);

/// sup over [0, N] of the euclidean distance of path values.
double sup_distance(const StepPath& a, const StepPath& b, double window);

/// Oscillation modulus w'_N(a, zeta): minimum over zeta-sparse partitions of
/// the max oscillation of a over cells [t_{i-1}, t_i).
double w_prime(const StepPath& a, double window, double zeta);

/// A zeta-sparse partition achieving max cell oscillation <= w_prime + eps.
SparsePartition sparse_partition(const StepPath& a, double window, double zeta, double eps);

struct UniformBoundReport {
    bool finite_limits = false;  // terminal (at-infinity) values all finite
    bool local_bounds = false;   // windowed sup norms all finite
    bool tail_bound = false;     // declared limsup bound B finite
    bool pass = false;
    double bound = 0;  // implied uniform sup bound when pass
    std::string detail;
};

/// Finite-prefix surrogate of the uniform-boundedness lemma: the family is
/// uniformly bounded when every member is locally bounded, has a finite value
/// at infinity, and the declared tail limsup bound is finite.
UniformBoundReport check_uniform_bounded(const std::vector<StepPath>& seq,
                                         const std::vector<std::vector<double>>& terminal_values,
                                         double tail_bound);

}  // namespace bsdelab
