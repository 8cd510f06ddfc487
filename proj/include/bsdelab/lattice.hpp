#pragma once

#include <functional>
#include <vector>

namespace bsdelab {

/// Recombining binomial lattice for the driver-only case f = 0: the scaled
/// random walk X moves by +-sqrt(T/k) with probability 1/2, and the value
/// surface v[i][j] = E[g(X_T) | X_{t_i} = x(i,j)] is filled by one backward
/// pass over O(k^2) states instead of the 2^k scenario tree.
class Lattice {
public:
    Lattice(int k, double T, const std::function<double(double)>& g);

    int steps() const { return k_; }
    double horizon() const { return T_; }
    double h() const { return h_; }

    /// Walk value at level i with j up-moves (j in 0..i).
    double x(int i, int j) const { return (2.0 * j - i) * h_; }
    double value(int i, int j) const { return v_[i][j]; }
    double y0() const { return v_[0][0]; }

    /// GKW control for the step out of (i, j): (v_up - v_down) / (2h).
    double z(int i, int j) const;

private:
    int k_;
    double T_, h_;
    std::vector<std::vector<double>> v_;
};

}  // namespace bsdelab
