#include "bsdelab/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace bsdelab {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

double reference_value(const std::string& problem, double t, double x, double T, double lambda,
                       double xi_const) {
    if (problem == "martingale-square") return x * x + (T - t);
    if (problem == "martingale-call") {
        double s = std::sqrt(std::max(T - t, 0.0));
        if (s == 0) return std::max(x, 0.0);
        return x * normal_cdf(x / s) + s * normal_pdf(x / s);
    }
    if (problem == "linear-lambda") return xi_const * std::exp(lambda * (T - t));
    if (problem == "jump-linear") return x;
    if (problem == "zero") return 0.0;
    throw std::invalid_argument("reference_value: unknown problem '" + problem + "'");
}

double reference_derivative(const std::string& problem, double t, double x, double T) {
    if (problem == "martingale-square") return 2 * x;
    if (problem == "martingale-call") {
        double s = std::sqrt(std::max(T - t, 0.0));
        if (s == 0) return x > 0 ? 1.0 : (x < 0 ? 0.0 : 0.5);
        return normal_cdf(x / s);
    }
    if (problem == "linear-lambda" || problem == "zero") return 0.0;
    if (problem == "jump-linear") return 0.0;
    throw std::invalid_argument("reference_derivative: unknown problem '" + problem + "'");
}

double ode_backward(const GeneratorSpec& gen, double t, double T, double xi, int steps) {
    if (t >= T) return xi;
    std::vector<double> empty;
    auto rhs = [&](double s, double y) { return -gen.f(s, y, 0.0, empty, empty, 1.0); };
    double h = -(T - t) / steps;  // integrate backward from T to t
    double y = xi, s = T;
    for (int i = 0; i < steps; ++i) {
        double k1 = rhs(s, y);
        double k2 = rhs(s + h / 2, y + h / 2 * k1);
        double k3 = rhs(s + h / 2, y + h / 2 * k2);
        double k4 = rhs(s + h, y + h * k3);
        y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        s += h;
    }
    return y;
}

ReferenceEval reference_solution(const std::string& problem, const StandardData& data) {
    ReferenceEval out;
    const auto& nodes = data.tree.nodes;
    out.Y.resize(nodes.size());
    double lambda = data.gen.a;
    double xi0 = data.xi.empty() ? 0.0 : data.xi[0];

    if (problem == "ode-limit") {
        // deterministic limit: y(t) solves the backward ODE; value depends on
        // the grid time only
        std::vector<double> per_level(data.tree.levels() + 1);
        for (std::size_t i = 0; i < per_level.size(); ++i)
            per_level[i] = ode_backward(data.gen, data.tree.times[i], data.T, xi0);
        for (std::size_t v = 0; v < nodes.size(); ++v) out.Y[v] = per_level[nodes[v].level];
        return out;
    }

    bool use_nat = problem == "jump-linear";
    bool mart = problem == "martingale-square" || problem == "martingale-call";
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        double t = data.tree.times[nodes[v].level];
        double x = use_nat ? data.xnat[v] : data.xo[v];
        out.Y[v] = reference_value(problem, t, x, data.T, lambda, xi0);
    }
    if (mart) {
        out.has_Z = true;
        out.Z.resize(nodes.size(), 0.0);
        for (std::size_t v = 0; v < nodes.size(); ++v) {
            double t = data.tree.times[nodes[v].level];
            out.Z[v] = reference_derivative(problem, t, data.xo[v], data.T);
        }
    }
    return out;
}

}  // namespace bsdelab
