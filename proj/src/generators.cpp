#include "bsdelab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bsdelab {

double GeneratorSpec::alpha() const {
    return std::max({std::sqrt(std::max(r, 0.0)), theta_circ, theta_nat, alpha_floor});
}

GeneratorSpec make_generator(const std::string& name, double a, double b) {
    GeneratorSpec g;
    g.name = name;
    g.a = a;
    g.b = b;
    if (name == "zero") {
        g.f = [](double, double, double, const std::vector<double>&, const std::vector<double>&,
                 double) { return 0.0; };
    } else if (name == "constant") {
        g.alpha_floor = b > 0 ? b : 1.0;  // alpha must be positive where f != 0
        g.f = [a](double, double, double, const std::vector<double>&, const std::vector<double>&,
                  double) { return a; };
    } else if (name == "linear_y") {
        g.r = a * a;
        g.f = [a](double, double y, double, const std::vector<double>&, const std::vector<double>&,
                  double) { return a * y; };
    } else if (name == "call") {
        g.r = a * a;
        g.f = [a, b](double, double y, double, const std::vector<double>&,
                     const std::vector<double>&, double) { return a * std::max(y - b, 0.0); };
    } else if (name == "jump_linear") {
        // theta_nat is instance-dependent; the data builder fills it in
        g.f = [a](double, double, double, const std::vector<double>& u,
                  const std::vector<double>& w, double dC) {
            double s = 0;
            for (std::size_t j = 0; j < u.size() && j < w.size(); ++j) s += u[j] * w[j];
            return a * s / dC;
        };
    } else {
        throw std::invalid_argument("make_generator: unknown generator '" + name + "'");
    }
    return g;
}

}  // namespace bsdelab
