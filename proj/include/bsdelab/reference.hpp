#pragma once

#include <string>
#include <vector>

#include "bsdelab/standard_data.hpp"

namespace bsdelab {

/// Gaussian cdf / pdf helpers used by the closed-form limit solutions.
double normal_cdf(double x);
double normal_pdf(double x);

/// Limit value function u(t, x) evaluated pathwise, with its first spatial
/// derivative where a closed form exists.
struct ReferenceEval {
    std::vector<double> Y;  // per node, u(t_i, driver value)
    std::vector<double> Z;  // per node, u_x(t_i-, left value); empty when unknown
    bool has_Z = false;
};

/// Catalog of closed-form limit solutions:
///   martingale-square : f = 0, xi = (Xo_T)^2, u(t,x) = x^2 + (T - t)
///   martingale-call   : f = 0, xi = (Xo_T)^+, heat-semigroup closed form
///   linear-lambda     : deterministic, f = lambda y, Y(t) = xi e^{lambda(T-t)}
///   ode-limit         : deterministic, backward Runge-Kutta solve of y' = -f(t, y)
///   jump-linear       : f = 0, xi = Xnat_T, Y = Xnat (compensated-jump martingale)
///   zero              : f = 0, xi = 0
ReferenceEval reference_solution(const std::string& problem, const StandardData& data);

/// Limit value u(t, x) for the closed-form members of the catalog.
double reference_value(const std::string& problem, double t, double x, double T, double lambda,
                       double xi_const = 1.0);

/// Spatial derivative u_x(t, x) for the martingale problems.
double reference_derivative(const std::string& problem, double t, double x, double T);

/// Backward fourth-order Runge-Kutta solve of y' = -f(t, y), y(T) = xi,
/// returning y(t) (deterministic-limit reference).
double ode_backward(const GeneratorSpec& gen, double t, double T, double xi, int steps = 4096);

}  // namespace bsdelab
