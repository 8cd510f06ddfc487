#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace bsdelab {

/// Finite-jump cadlag path on a bounded window [0, T].
///
/// The path is constant between jumps and right-continuous: evaluation at t
/// returns the value recorded after the last jump time <= t.  Jump times are
/// strictly increasing and live in [0, T).
class StepPath {
public:
    /// Constant path.
    StepPath(std::vector<double> initial, double window_end);

    /// Scalar convenience constructor.
    static StepPath constant(double v, double window_end);

    /// Scalar path from (time, value) jump list.
    static StepPath scalar(double v0, double window_end,
                           const std::vector<std::pair<double, double>>& jumps);

    /// Append a jump; time must exceed all previous jump times and be < T.
    void add_jump(double t, std::vector<double> value);
    void add_jump(double t, double value);  // scalar shortcut

    std::size_t dimension() const { return init_.size(); }
    double window() const { return T_; }
    std::size_t jump_count() const { return times_.size(); }
    double jump_time(std::size_t j) const { return times_[j]; }

    /// Value on segment i: i = 0 is the initial value, i = j+1 the value
    /// after jump j.
    const std::vector<double>& segment_value(std::size_t i) const;

    std::vector<double> at(double t) const;
    std::vector<double> left_limit(double t) const;
    double at1(double t) const;          // scalar paths only
    double left_limit1(double t) const;  // scalar paths only

    /// Index of the segment active at time t (0-based as above).
    std::size_t segment_at(double t) const;

    /// sup over [0, upto] of the euclidean norm of the path value.
    double sup_norm(double upto) const;

    /// Euclidean norm of the jump at jump index j.
    double jump_magnitude(std::size_t j) const;

    bool same_values(const StepPath& other, double upto, double tol = 0.0) const;

    /// Line-oriented text record: header "d T n_jumps", one "t v1 .. vd" row
    /// per segment (the initial segment uses t = 0); 17 significant digits.
    std::string to_text() const;
    static StepPath from_text(const std::string& text);

private:
    std::vector<double> init_;
    std::vector<double> times_;
    std::vector<std::vector<double>> values_;  // values_[j] = value after jump j
    double T_;
};

double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace bsdelab
