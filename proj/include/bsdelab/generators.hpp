#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bsdelab {

/// Generator f(t, y, z, u(.)) with declared stochastic-Lipschitz data
/// (r, theta_circ, theta_nat); alpha = max{sqrt(r), theta_circ, theta_nat}
/// with an optional floor for generators that need alpha > 0 where f != 0.
struct GeneratorSpec {
    std::string name = "zero";
    double a = 0, b = 0;  // catalog parameters
    double r = 0;
    double theta_circ = 0;
    double theta_nat = 0;
    double alpha_floor = 0;

    // f(t, y, z, u, kernel masses w_j at the node, dC of the step)
    std::function<double(double, double, double, const std::vector<double>&,
                         const std::vector<double>&, double)>
        f;

    double alpha() const;
    bool is_zero() const { return name == "zero"; }
};

/// Registered catalog: zero | constant | linear_y | call | jump_linear.
///   constant:     f = a                          (alpha floor b when given)
///   linear_y:     f = a y,       r = a^2
///   call:         f = a (y - b)^+, r = a^2
///   jump_linear:  f = a Khat(u) = a sum_j u_j w_j / dC; theta_nat is filled
///                 in by the data builder from the instance's jump structure.
GeneratorSpec make_generator(const std::string& name, double a = 0, double b = 0);

}  // namespace bsdelab
