#include "bsdelab/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace bsdelab {

Lattice::Lattice(int k, double T, const std::function<double(double)>& g) : k_(k), T_(T) {
    if (k <= 0 || T <= 0) throw std::invalid_argument("Lattice: k and T must be positive");
    h_ = std::sqrt(T / k);
    v_.resize(k + 1);
    v_[k].resize(k + 1);
    for (int j = 0; j <= k; ++j) v_[k][j] = g(x(k, j));
    for (int i = k - 1; i >= 0; --i) {
        v_[i].resize(i + 1);
        for (int j = 0; j <= i; ++j) v_[i][j] = 0.5 * (v_[i + 1][j + 1] + v_[i + 1][j]);
    }
}

double Lattice::z(int i, int j) const {
    if (i >= k_) throw std::out_of_range("Lattice::z: no step out of the terminal level");
    return (v_[i + 1][j + 1] - v_[i + 1][j]) / (2 * h_);
}

}  // namespace bsdelab
