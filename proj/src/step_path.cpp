#include "bsdelab/step_path.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace bsdelab {

StepPath::StepPath(std::vector<double> initial, double window_end)
    : init_(std::move(initial)), T_(window_end) {
    if (init_.empty()) throw std::invalid_argument("StepPath: dimension must be positive");
    if (!(T_ > 0)) throw std::invalid_argument("StepPath: window end must be positive");
}

StepPath StepPath::constant(double v, double window_end) {
    return StepPath(std::vector<double>{v}, window_end);
}

StepPath StepPath::scalar(double v0, double window_end,
                          const std::vector<std::pair<double, double>>& jumps) {
    StepPath p(std::vector<double>{v0}, window_end);
    for (const auto& [t, v] : jumps) p.add_jump(t, v);
    return p;
}

void StepPath::add_jump(double t, std::vector<double> value) {
    if (value.size() != init_.size())
        throw std::invalid_argument("StepPath::add_jump: dimension mismatch");
    if (!(t >= 0) || !(t < T_))
        throw std::invalid_argument("StepPath::add_jump: jump time outside [0, T)");
    if (!times_.empty() && !(t > times_.back()))
        throw std::invalid_argument("StepPath::add_jump: jump times must increase strictly");
    times_.push_back(t);
    values_.push_back(std::move(value));
}

void StepPath::add_jump(double t, double value) {
    add_jump(t, std::vector<double>{value});
}

const std::vector<double>& StepPath::segment_value(std::size_t i) const {
    if (i == 0) return init_;
    return values_[i - 1];
}

std::size_t StepPath::segment_at(double t) const {
    // number of jump times <= t
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return static_cast<std::size_t>(it - times_.begin());
}

std::vector<double> StepPath::at(double t) const { return segment_value(segment_at(t)); }

std::vector<double> StepPath::left_limit(double t) const {
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    return segment_value(static_cast<std::size_t>(it - times_.begin()));
}

double StepPath::at1(double t) const {
    if (init_.size() != 1) throw std::invalid_argument("StepPath::at1: path not scalar");
    return at(t)[0];
}

double StepPath::left_limit1(double t) const {
    if (init_.size() != 1) throw std::invalid_argument("StepPath::left_limit1: path not scalar");
    return left_limit(t)[0];
}

double StepPath::sup_norm(double upto) const {
    double s = 0;
    for (std::size_t i = 0; i <= times_.size(); ++i) {
        if (i > 0 && times_[i - 1] > upto) break;
        double n2 = 0;
        for (double v : segment_value(i)) n2 += v * v;
        s = std::max(s, n2);
    }
    return std::sqrt(s);
}

double StepPath::jump_magnitude(std::size_t j) const {
    return euclidean_distance(segment_value(j), segment_value(j + 1));
}

bool StepPath::same_values(const StepPath& other, double upto, double tol) const {
    std::vector<double> knots{0.0, upto};
    for (double t : times_)
        if (t <= upto) knots.push_back(t);
    for (std::size_t j = 0; j < other.jump_count(); ++j)
        if (other.jump_time(j) <= upto) knots.push_back(other.jump_time(j));
    for (double t : knots)
        if (euclidean_distance(at(t), other.at(t)) > tol) return false;
    return true;
}

std::string StepPath::to_text() const {
    std::ostringstream os;
    char buf[64];
    os << init_.size() << ' ';
    std::snprintf(buf, sizeof buf, "%.17g", T_);
    os << buf << ' ' << times_.size() << '\n';
    auto row = [&](double t, const std::vector<double>& v) {
        std::snprintf(buf, sizeof buf, "%.17g", t);
        os << buf;
        for (double x : v) {
            std::snprintf(buf, sizeof buf, "%.17g", x);
            os << ' ' << buf;
        }
        os << '\n';
    };
    row(0.0, init_);
    for (std::size_t j = 0; j < times_.size(); ++j) row(times_[j], values_[j]);
    return os.str();
}

StepPath StepPath::from_text(const std::string& text) {
    std::istringstream is(text);
    std::size_t d = 0, nj = 0;
    double T = 0;
    if (!(is >> d >> T >> nj)) throw std::invalid_argument("StepPath::from_text: bad header");
    auto read_row = [&](double& t, std::vector<double>& v) {
        if (!(is >> t)) throw std::invalid_argument("StepPath::from_text: truncated record");
        v.resize(d);
        for (double& x : v)
            if (!(is >> x)) throw std::invalid_argument("StepPath::from_text: truncated row");
    };
    double t;
    std::vector<double> v;
    read_row(t, v);
    StepPath p(v, T);
    for (std::size_t j = 0; j < nj; ++j) {
        read_row(t, v);
        p.add_jump(t, v);
    }
    return p;
}

double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("euclidean_distance: dimension mismatch");
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace bsdelab
