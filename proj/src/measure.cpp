#include "bsdelab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace bsdelab {

PwlPath::PwlPath(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
    if (knots_.empty()) throw std::invalid_argument("PwlPath: needs at least one knot");
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (!(knots_[i].first > knots_[i - 1].first))
            throw std::invalid_argument("PwlPath: knot abscissae must increase");
}

double PwlPath::at(double x) const {
    if (x <= knots_.front().first) return knots_.front().second;
    if (x >= knots_.back().first) return knots_.back().second;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), std::make_pair(x, 1e300));
    auto lo = *(it - 1);
    auto hi = *it;
    double w = (x - lo.first) / (hi.first - lo.first);
    return lo.second + w * (hi.second - lo.second);
}

double PwlPath::sup_abs(double upto) const {
    double s = std::fabs(at(0.0));
    for (const auto& [x, v] : knots_) {
        if (x > upto) break;
        s = std::max(s, std::fabs(v));
    }
    s = std::max(s, std::fabs(at(upto)));
    return s;
}

double integrand_at(const Integrand& a, double x) {
    if (const StepPath* p = std::get_if<StepPath>(&a)) return p->at1(x);
    return std::get<PwlPath>(a).at(x);
}

double integrand_sup(const Integrand& a, double upto) {
    if (const StepPath* p = std::get_if<StepPath>(&a)) return p->sup_norm(std::min(upto, p->window()));
    return std::get<PwlPath>(a).sup_abs(upto);
}

namespace {

std::vector<double> integrand_breakpoints(const Integrand& a) {
    std::vector<double> b;
    if (const StepPath* p = std::get_if<StepPath>(&a)) {
        for (std::size_t j = 0; j < p->jump_count(); ++j) b.push_back(p->jump_time(j));
    } else {
        for (const auto& [x, v] : std::get<PwlPath>(a).knots()) b.push_back(x);
    }
    return b;
}

}  // namespace

FiniteMeasure FiniteMeasure::atomic(std::vector<std::pair<double, double>> atoms,
                                    bool allow_zero_atom) {
    return mixed(std::move(atoms), {}, allow_zero_atom);
}

FiniteMeasure FiniteMeasure::lebesgue(double b) {
    if (!(b > 0)) throw std::invalid_argument("FiniteMeasure::lebesgue: need b > 0");
    return piecewise_linear({{0.0, 0.0}, {b, b}});
}

FiniteMeasure FiniteMeasure::piecewise_linear(std::vector<std::pair<double, double>> knots) {
    return mixed({}, std::move(knots), false);
}

FiniteMeasure FiniteMeasure::mixed(std::vector<std::pair<double, double>> atoms,
                                   std::vector<std::pair<double, double>> plinear_knots,
                                   bool allow_zero_atom) {
    FiniteMeasure m;
    std::sort(atoms.begin(), atoms.end());
    for (const auto& [loc, mass] : atoms) {
        if (!(mass > 0)) throw std::invalid_argument("FiniteMeasure: atom mass must be positive");
        if (loc < 0) throw std::invalid_argument("FiniteMeasure: atom location must be >= 0");
        if (loc == 0 && !allow_zero_atom)
            throw std::invalid_argument("FiniteMeasure: atom at 0 not allowed (mu({0}) = 0)");
    }
    for (std::size_t i = 1; i < atoms.size(); ++i)
        if (atoms[i].first == atoms[i - 1].first)
            throw std::invalid_argument("FiniteMeasure: duplicate atom location");
    if (!plinear_knots.empty()) {
        if (plinear_knots.front() != std::make_pair(0.0, 0.0))
            throw std::invalid_argument("FiniteMeasure: continuous part must start at (0, 0)");
        for (std::size_t i = 1; i < plinear_knots.size(); ++i) {
            if (!(plinear_knots[i].first > plinear_knots[i - 1].first))
                throw std::invalid_argument("FiniteMeasure: plinear abscissae must increase");
            if (plinear_knots[i].second < plinear_knots[i - 1].second)
                throw std::invalid_argument("FiniteMeasure: distribution function must not decrease");
        }
    }
    m.atoms_ = std::move(atoms);
    m.pl_ = std::move(plinear_knots);
    return m;
}

double FiniteMeasure::total_mass() const {
    double s = pl_.empty() ? 0.0 : pl_.back().second;
    for (const auto& [loc, mass] : atoms_) s += mass;
    return s;
}

double FiniteMeasure::cdf(double t) const {
    if (t < 0) return 0;
    double s = 0;
    for (const auto& [loc, mass] : atoms_) {
        if (loc > t) break;
        s += mass;
    }
    if (!pl_.empty()) {
        if (t >= pl_.back().first) {
            s += pl_.back().second;
        } else {
            auto it = std::upper_bound(pl_.begin(), pl_.end(), std::make_pair(t, 1e300));
            auto lo = *(it - 1);
            auto hi = *it;
            s += lo.second + (t - lo.first) / (hi.first - lo.first) * (hi.second - lo.second);
        }
    }
    return s;
}

double FiniteMeasure::atom_mass_at(double t) const {
    for (const auto& [loc, mass] : atoms_) {
        if (loc == t) return mass;
        if (loc > t) break;
    }
    return 0;
}

double FiniteMeasure::cdf_left(double t) const { return cdf(t) - atom_mass_at(t); }

double FiniteMeasure::mass_interval(double lo, double hi, bool incl_lo, bool incl_hi) const {
    if (hi < lo || (hi == lo && !(incl_lo && incl_hi))) return 0;
    double start = incl_lo ? cdf_left(lo) : cdf(lo);
    double end = incl_hi ? cdf(hi) : cdf_left(hi);
    return std::max(0.0, end - start);
}

double FiniteMeasure::support_end() const {
    double e = 0;
    if (!atoms_.empty()) e = std::max(e, atoms_.back().first);
    if (!pl_.empty()) e = std::max(e, pl_.back().first);
    return e;
}

std::string FiniteMeasure::to_text() const {
    std::ostringstream os;
    char buf[64];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    os << "atoms:";
    for (const auto& [t, m] : atoms_) os << " (" << num(t) << ',' << num(m) << ')';
    os << "\nplinear:";
    for (const auto& [t, f] : pl_) os << " (" << num(t) << ',' << num(f) << ')';
    os << '\n';
    return os.str();
}

FiniteMeasure FiniteMeasure::from_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::vector<std::pair<double, double>> atoms, pl;
    auto parse_pairs = [](const std::string& s, std::vector<std::pair<double, double>>& out) {
        std::size_t i = 0;
        while ((i = s.find('(', i)) != std::string::npos) {
            std::size_t c = s.find(',', i);
            std::size_t e = s.find(')', i);
            if (c == std::string::npos || e == std::string::npos || c > e)
                throw std::invalid_argument("FiniteMeasure::from_text: malformed pair");
            out.emplace_back(std::stod(s.substr(i + 1, c - i - 1)),
                             std::stod(s.substr(c + 1, e - c - 1)));
            i = e + 1;
        }
    };
    bool saw = false;
    while (std::getline(is, line)) {
        if (line.rfind("atoms:", 0) == 0) {
            parse_pairs(line, atoms);
            saw = true;
        } else if (line.rfind("plinear:", 0) == 0) {
            parse_pairs(line, pl);
            saw = true;
        }
    }
    if (!saw) throw std::invalid_argument("FiniteMeasure::from_text: no recognized sections");
    return mixed(std::move(atoms), std::move(pl), true);
}

namespace {

std::vector<double> merged_candidates(const FiniteMeasure& mu, const FiniteMeasure& nu) {
    std::vector<double> c{0.0};
    for (const auto& [t, m] : mu.atoms()) c.push_back(t);
    for (const auto& [t, m] : nu.atoms()) c.push_back(t);
    for (const auto& [t, f] : mu.plinear()) c.push_back(t);
    for (const auto& [t, f] : nu.plinear()) c.push_back(t);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

}  // namespace

double ks_distance(const FiniteMeasure& mu, const FiniteMeasure& nu) {
    double s = std::fabs(mu.total_mass() - nu.total_mass());  // the point at infinity
    for (double t : merged_candidates(mu, nu)) {
        s = std::max(s, std::fabs(mu.cdf(t) - nu.cdf(t)));
        s = std::max(s, std::fabs(mu.cdf_left(t) - nu.cdf_left(t)));
    }
    return s;
}

double ks_distance_window(const FiniteMeasure& mu, const FiniteMeasure& nu, double window) {
    double s = 0;
    std::vector<double> cand = merged_candidates(mu, nu);
    cand.push_back(window);
    for (double t : cand) {
        if (t > window) continue;
        s = std::max(s, std::fabs(mu.cdf(t) - nu.cdf(t)));
        s = std::max(s, std::fabs(mu.cdf_left(t) - nu.cdf_left(t)));
    }
    return s;
}

double interval_sup_distance(const FiniteMeasure& mu, const FiniteMeasure& nu, double window) {
    // For D = F_mu - F_nu the four interval types give
    //   lambda(I) = {D(b) or D(b-)} - {D(a) or D(a-)},  a <= b in [0, N];
    // sweep over candidates keeping running extrema of min/max(D(t), D(t-)).
    std::vector<double> cand = merged_candidates(mu, nu);
    cand.push_back(window);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    double best = 0;
    double run_min = 1e300, run_max = -1e300;
    for (double t : cand) {
        if (t > window) break;
        double r = mu.cdf(t) - nu.cdf(t);
        double l = (mu.cdf_left(t) - nu.cdf_left(t));
        double hi = std::max(l, r), lo = std::min(l, r);
        run_min = std::min(run_min, lo);
        run_max = std::max(run_max, hi);
        best = std::max(best, hi - run_min);
        best = std::max(best, run_max - lo);
    }
    return best;
}

namespace {

// Integral of alpha against the continuous part of mu over (a, b].
double continuous_integral(const Integrand& alpha, const FiniteMeasure& mu, double a, double b) {
    const auto& pl = mu.plinear();
    if (pl.size() < 2 || b <= a) return 0;
    std::vector<double> cuts{a, b};
    for (const auto& [t, f] : pl)
        if (t > a && t < b) cuts.push_back(t);
    for (double t : integrand_breakpoints(alpha))
        if (t > a && t < b) cuts.push_back(t);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double s = 0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        double lo = cuts[i - 1], hi = cuts[i];
        double rho = (mu.cdf_left(hi) - mu.atom_mass_at(lo) - mu.cdf(lo));  // continuous rise
        // continuous rise over (lo, hi): difference of the pl part only
        double flo = mu.cdf(lo), fhi = mu.cdf(hi);
        double atom_rise = 0;
        for (const auto& [t, m] : mu.atoms())
            if (t > lo && t <= hi) atom_rise += m;
        rho = fhi - flo - atom_rise;
        if (rho == 0) continue;
        // alpha is linear (or constant) on the open cell: trapezoid is exact
        double mid_lo = integrand_at(alpha, std::nextafter(lo, hi));
        double va, vb;
        if (std::holds_alternative<StepPath>(alpha)) {
            va = vb = mid_lo;
        } else {
            va = integrand_at(alpha, lo);
            vb = integrand_at(alpha, hi);
        }
        s += 0.5 * (va + vb) * rho;
    }
    return s;
}

}  // namespace

double integrate(const Integrand& alpha, const FiniteMeasure& mu, double upto) {
    double s = 0;
    for (const auto& [loc, mass] : mu.atoms()) {
        if (loc > upto) break;
        s += mass * integrand_at(alpha, loc);
    }
    s += continuous_integral(alpha, mu, 0.0, upto);
    if (!mu.plinear().empty() && upto >= 0) {
        // account for continuous mass exactly at 0 (none: F(0) = 0)
    }
    return s;
}

StepPath running_integral(const Integrand& alpha, const FiniteMeasure& mu, double window,
                          double mesh) {
    if (!(mesh > 0)) throw std::invalid_argument("running_integral: mesh must be positive");
    // widen the window a hair so an event exactly at `window` remains a valid jump
    double Tp = window + std::max(1e-9, 1e-9 * window);
    std::vector<double> events{window};
    for (const auto& [t, m] : mu.atoms())
        if (t <= window) events.push_back(t);
    for (const auto& [t, f] : mu.plinear())
        if (t > 0 && t <= window) events.push_back(t);
    for (double t : integrand_breakpoints(alpha))
        if (t > 0 && t <= window) events.push_back(t);
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());

    double v0 = mu.atom_mass_at(0.0) * integrand_at(alpha, 0.0);
    StepPath out(std::vector<double>{v0}, Tp);
    double value = v0, prev = 0.0;
    for (double t : events) {
        if (t <= prev) continue;
        double c = continuous_integral(alpha, mu, prev, t);
        int chunks = std::max(1, static_cast<int>(std::ceil(std::fabs(c) / mesh)));
        for (int q = 1; q <= chunks; ++q) {
            double te = prev + (t - prev) * q / chunks;
            double inc = continuous_integral(alpha, mu, prev + (t - prev) * (q - 1) / chunks, te);
            double atom_inc = (q == chunks) ? mu.atom_mass_at(t) * integrand_at(alpha, t) : 0.0;
            if (inc != 0 || atom_inc != 0) {
                value += inc + atom_inc;
                out.add_jump(te, value);
            }
        }
        // make sure the atom lands even if both increments were zero
        prev = t;
    }
    return out;
}

FiniteMeasure discretize_sparse(const FiniteMeasure& mu, const SparsePartition& P) {
    P.validate();
    std::vector<std::pair<double, double>> atoms;
    for (std::size_t i = 1; i < P.knots.size(); ++i) {
        double lo = P.knots[i - 1], hi = P.knots[i];
        double m = mu.mass_interval(lo, hi, true, false);
        if (m > 0) atoms.emplace_back(lo, m);
    }
    return FiniteMeasure::atomic(std::move(atoms), /*allow_zero_atom=*/true);
}

StepPath cdf_step_path(const FiniteMeasure& mu, double window, double mesh) {
    StepPath one = StepPath::constant(1.0, window + 1.0);
    return running_integral(Integrand{one}, mu, window, mesh);
}

double max_atom_mass(const FiniteMeasure& mu, const FiniteMeasure& nu, double window) {
    double s = 0;
    for (const auto& [t, m] : mu.atoms())
        if (t <= window) s = std::max(s, m);
    for (const auto& [t, m] : nu.atoms())
        if (t <= window) s = std::max(s, m);
    return s;
}

}  // namespace bsdelab
