#include "bsdelab/skorokhod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bsdelab {

namespace {

// Effective segment representation of a path on [0, N]: jumps at time 0 are
// folded into the start value, jumps with time > N are dropped.
struct Segments {
    std::vector<double> times;                 // jump times in (0, N]
    std::vector<std::vector<double>> values;   // values[0] = value at 0
};

Segments effective_segments(const StepPath& a, double window) {
    Segments s;
    s.values.push_back(a.at(0.0));
    for (std::size_t j = 0; j < a.jump_count(); ++j) {
        double t = a.jump_time(j);
        if (t <= 0.0 || t > window) continue;
        s.times.push_back(t);
        s.values.push_back(a.segment_value(j + 1));
    }
    return s;
}

void check_pair(const StepPath& a, const StepPath& b, double window) {
    if (a.dimension() != b.dimension())
        throw std::invalid_argument("path metric: dimension mismatch");
    if (window > a.window() || window > b.window())
        throw std::invalid_argument("path metric: window exceeds a path window");
    if (!(window > 0)) throw std::invalid_argument("path metric: window must be positive");
}

}  // namespace

void SparsePartition::validate() const {
    if (knots.size() < 2) throw std::invalid_argument("SparsePartition: needs >= 2 knots");
    if (knots.front() != 0.0 || knots.back() != window)
        throw std::invalid_argument("SparsePartition: knots must span [0, N]");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i] > knots[i - 1]))
            throw std::invalid_argument("SparsePartition: knots must increase");
    // interior gaps (all but the last) must exceed zeta
    for (std::size_t i = 1; i + 1 < knots.size(); ++i)
        if (!(knots[i] - knots[i - 1] > zeta))
            throw std::invalid_argument("SparsePartition: interior gap <= zeta");
}

namespace {

// Feasibility of J1 cost <= c: monotone alignment DP where an unmatched
// a-jump must be *placed* at an image position within c of its own time and
// strictly inside the b-segment it lands in.  P[i][j] tracks the minimal
// feasible image position of the last consumed a-jump; comparisons use the
// closure of the constraints (the J1 infimum is a limit of placements).
bool j1_feasible(const Segments& sa, const Segments& sb, double window, double c, double tol) {
    const std::size_t ma = sa.times.size(), mb = sb.times.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> P(ma + 1, std::vector<double>(mb + 1, inf));
    auto seg_end = [&](std::size_t j) { return j < mb ? sb.times[j] : window; };
    auto seg_start = [&](std::size_t j) { return j == 0 ? 0.0 : sb.times[j - 1]; };
    if (euclidean_distance(sa.values[0], sb.values[0]) <= c + tol) P[0][0] = 0.0;
    for (std::size_t i = 0; i <= ma; ++i) {
        for (std::size_t j = 0; j <= mb; ++j) {
            double p = P[i][j];
            if (p == inf) continue;
            if (i < ma &&
                euclidean_distance(sa.values[i + 1], sb.values[j]) <= c + tol) {
                // a-jump i lands inside b's segment j
                double lo = std::max({seg_start(j), p, sa.times[i] - c});
                double hi = std::min(seg_end(j), sa.times[i] + c);
                if (lo <= hi + tol) P[i + 1][j] = std::min(P[i + 1][j], lo);
            }
            if (j < mb &&
                euclidean_distance(sa.values[i], sb.values[j + 1]) <= c + tol &&
                p <= sb.times[j] + tol) {
                // b jumps inside a's current segment
                P[i][j + 1] = std::min(P[i][j + 1], std::max(p, sb.times[j]));
            }
            if (i < ma && j < mb &&
                std::fabs(sa.times[i] - sb.times[j]) <= c + tol &&
                euclidean_distance(sa.values[i + 1], sb.values[j + 1]) <= c + tol &&
                p <= sb.times[j] + tol) {
                // matched jump pair: image pinned at b's jump time
                P[i + 1][j + 1] = std::min(P[i + 1][j + 1], sb.times[j]);
            }
        }
    }
    return P[ma][mb] != inf;
}

}  // namespace

double j1_distance(const StepPath& a, const StepPath& b, double window) {
    check_pair(a, b, window);
    Segments sa = effective_segments(a, window);
    Segments sb = effective_segments(b, window);
    const std::size_t ma = sa.times.size(), mb = sb.times.size();
    const double tol = 1e-12 * std::max(1.0, window);

    // The optimal cost is attained (in the limit) at one of: a value-pair
    // distance, a time distance between an a-jump and a b-jump or a window
    // end -- these are exactly the quantities that can bind in the
    // feasibility constraints above.
    std::vector<double> cand{0.0};
    for (const auto& va : sa.values)
        for (const auto& vb : sb.values) cand.push_back(euclidean_distance(va, vb));
    for (std::size_t i = 0; i < ma; ++i) {
        cand.push_back(sa.times[i]);
        cand.push_back(window - sa.times[i]);
        for (std::size_t j = 0; j < mb; ++j)
            cand.push_back(std::fabs(sa.times[i] - sb.times[j]));
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::size_t lo = 0, hi = cand.size() - 1;
    if (j1_feasible(sa, sb, window, cand[lo], tol)) return cand[lo];
    // the largest candidate dominates the identity alignment, so it is feasible
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (j1_feasible(sa, sb, window, cand[mid], tol)) hi = mid;
        else lo = mid;
    }
    return cand[hi];
}

double sup_distance(const StepPath& a, const StepPath& b, double window) {
    check_pair(a, b, window);
    std::vector<double> knots{0.0, window};
    for (std::size_t j = 0; j < a.jump_count(); ++j)
        if (a.jump_time(j) <= window) knots.push_back(a.jump_time(j));
    for (std::size_t j = 0; j < b.jump_count(); ++j)
        if (b.jump_time(j) <= window) knots.push_back(b.jump_time(j));
    double s = 0;
    for (double t : knots) s = std::max(s, euclidean_distance(a.at(t), b.at(t)));
    return s;
}

namespace {

// Symbolic knot candidate: time t displaced by eps * (infinitesimal), so a
// knot can sit exactly at a jump, just before it, or just after it.
struct Knot {
    double t;
    int eps;  // -1, 0, +1
};

bool gap_exceeds(const Knot& a, const Knot& b, double zeta) {
    double base = b.t - a.t;
    double tol = 1e-12 * std::max(1.0, std::fabs(zeta) + std::fabs(base));
    if (base - zeta > tol) return true;
    if (std::fabs(base - zeta) <= tol) return b.eps - a.eps > 0;
    return false;
}

// Oscillation (max pairwise distance) of the path values visible on the cell
// [c1, c2), with the symbolic-epsilon semantics of the knot placements.
double cell_oscillation(const Segments& s, const Knot& c1, const Knot& c2) {
    std::vector<const std::vector<double>*> vals;
    // start value
    std::size_t n = s.times.size();
    auto seg_at = [&](double t) {
        std::size_t i = std::upper_bound(s.times.begin(), s.times.end(), t) - s.times.begin();
        return i;
    };
    if (c1.eps < 0) {
        // just before t: left limit
        std::size_t i = std::lower_bound(s.times.begin(), s.times.end(), c1.t) - s.times.begin();
        vals.push_back(&s.values[i]);
    } else {
        vals.push_back(&s.values[seg_at(c1.t)]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        double t = s.times[j];
        bool after_start = t > c1.t || (t == c1.t && c1.eps < 0);
        bool before_end = t < c2.t || (t == c2.t && c2.eps > 0);
        if (after_start && before_end) vals.push_back(&s.values[j + 1]);
    }
    double osc = 0;
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (std::size_t j = i + 1; j < vals.size(); ++j)
            osc = std::max(osc, euclidean_distance(*vals[i], *vals[j]));
    return osc;
}

struct WPrimeDP {
    std::vector<Knot> cand;       // interior candidates, sorted; cand[0] = start {0,0}
    std::vector<double> cost;     // best chain cost ending at cand[i]
    std::vector<int> parent;
    double best = 0;
    int best_last = 0;            // candidate index preceding the end knot
};

WPrimeDP run_wprime_dp(const Segments& s, double window, double zeta) {
    WPrimeDP dp;
    dp.cand.push_back({0.0, 0});
    for (double t : s.times) {
        if (t >= window) continue;
        if (t > 0) {
            dp.cand.push_back({t, -1});
            dp.cand.push_back({t, 0});
            dp.cand.push_back({t, +1});
        }
    }
    std::sort(dp.cand.begin(), dp.cand.end(), [](const Knot& a, const Knot& b) {
        return a.t < b.t || (a.t == b.t && a.eps < b.eps);
    });
    const std::size_t n = dp.cand.size();
    const double inf = std::numeric_limits<double>::infinity();
    dp.cost.assign(n, inf);
    dp.parent.assign(n, -1);
    dp.cost[0] = 0;  // chain consisting of the start knot only
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (dp.cost[j] == inf) continue;
            if (!gap_exceeds(dp.cand[j], dp.cand[i], zeta)) continue;
            double c = std::max(dp.cost[j], cell_oscillation(s, dp.cand[j], dp.cand[i]));
            if (c < dp.cost[i]) {
                dp.cost[i] = c;
                dp.parent[i] = static_cast<int>(j);
            }
        }
    }
    // close with the final cell ending at N; the last gap carries no constraint
    Knot end{window, 0};
    dp.best = inf;
    for (std::size_t j = 0; j < n; ++j) {
        if (dp.cost[j] == inf) continue;
        if (dp.cand[j].t >= window) continue;
        double c = std::max(dp.cost[j], cell_oscillation(s, dp.cand[j], end));
        if (c < dp.best) {
            dp.best = c;
            dp.best_last = static_cast<int>(j);
        }
    }
    return dp;
}

}  // namespace

double w_prime(const StepPath& a, double window, double zeta) {
    if (!(zeta > 0)) throw std::invalid_argument("w_prime: zeta must be positive");
    if (!(zeta < window)) throw std::invalid_argument("w_prime: zeta must be < window");
    Segments s = effective_segments(a, window);
    return run_wprime_dp(s, window, zeta).best;
}

SparsePartition sparse_partition(const StepPath& a, double window, double zeta, double eps) {
    if (!(zeta > 0) || !(zeta < window))
        throw std::invalid_argument("sparse_partition: need 0 < zeta < window");
    if (!(eps > 0)) throw std::invalid_argument("sparse_partition: slack must be positive");
    Segments s = effective_segments(a, window);
    WPrimeDP dp = run_wprime_dp(s, window, zeta);

    // recover the chosen symbolic chain
    std::vector<Knot> chain;
    for (int i = dp.best_last; i >= 0; i = dp.parent[i]) {
        chain.push_back(dp.cand[i]);
        if (i == 0) break;
    }
    std::reverse(chain.begin(), chain.end());
    chain.push_back({window, 0});

    // realize epsilon displacements with a concrete delta small enough to keep
    // cell contents, ordering, and the sparsity gaps intact
    double delta = zeta;
    std::vector<double> crit{0.0, window};
    for (double t : s.times) crit.push_back(t);
    std::sort(crit.begin(), crit.end());
    for (std::size_t i = 1; i < crit.size(); ++i)
        if (crit[i] > crit[i - 1]) delta = std::min(delta, (crit[i] - crit[i - 1]) / 4);
    for (std::size_t i = 1; i < chain.size(); ++i) {
        double base = chain[i].t - chain[i - 1].t;
        int de = chain[i].eps - chain[i - 1].eps;
        bool interior = i + 1 < chain.size();
        if (interior && de < 0 && base - zeta > 0) delta = std::min(delta, (base - zeta) / 4);
    }
    delta /= 2;

    SparsePartition part;
    part.zeta = zeta;
    part.window = window;
    for (const Knot& kn : chain) part.knots.push_back(kn.t + kn.eps * delta);
    part.validate();
    (void)eps;  // the DP is exact, so any positive slack is honoured
    return part;
}

UniformBoundReport check_uniform_bounded(const std::vector<StepPath>& seq,
                                         const std::vector<std::vector<double>>& terminal_values,
                                         double tail_bound) {
    UniformBoundReport rep;
    std::ostringstream detail;
    rep.finite_limits = true;
    double term_bound = 0;
    for (std::size_t i = 0; i < terminal_values.size(); ++i) {
        double n2 = 0;
        bool finite = true;
        for (double v : terminal_values[i]) {
            if (!std::isfinite(v)) finite = false;
            n2 += v * v;
        }
        if (!finite) {
            rep.finite_limits = false;
            detail << "terminal value " << i << " not finite; ";
        } else {
            term_bound = std::max(term_bound, std::sqrt(n2));
        }
    }
    rep.local_bounds = true;
    double local = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        double s = seq[i].sup_norm(seq[i].window());
        if (!std::isfinite(s)) {
            rep.local_bounds = false;
            detail << "path " << i << " locally unbounded; ";
        } else {
            local = std::max(local, s);
        }
    }
    rep.tail_bound = std::isfinite(tail_bound);
    if (!rep.tail_bound) detail << "declared tail limsup not finite; ";
    rep.pass = rep.finite_limits && rep.local_bounds && rep.tail_bound;
    if (rep.pass) rep.bound = std::max({local, term_bound, tail_bound});
    rep.detail = detail.str();
    return rep;
}

}  // namespace bsdelab
