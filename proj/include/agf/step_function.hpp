#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace agf {

/// Nonnegative left-continuous step function on R_+.
///
/// Value values[i] on (t_{i-1}, t_i] with t_{-1} = 0, and zero beyond the last
/// breakpoint. Adjacent equal values are merged and trailing zeros dropped, so
/// the representation is canonical. Decreasing rearrangements are
/// nonincreasing; dyadic decrements in general are not.
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(std::vector<double> breakpoints, std::vector<double> values);

  std::size_t size() const { return breaks_.size(); }
  bool empty() const { return breaks_.empty(); }
  std::span<const double> breakpoints() const { return breaks_; }
  std::span<const double> values() const { return values_; }

  /// g(t); for t <= 0 the first value (the right limit at 0).
  double operator()(double t) const;
  bool is_nonincreasing() const;
  double support_end() const { return breaks_.empty() ? 0.0 : breaks_.back(); }

  /// |{t > 0 : g(t) > y}|.
  double measure_above(double y) const;

  /// int_lo^hi t^{a-1} g(t)^r dt, exact piece by piece. hi may be +inf.
  double power_integral(double a, double r, double lo, double hi) const;

  /// sup_{lo < t <= hi} t^a g(t) (attained at right ends of pieces).
  double weighted_sup(double a, double lo, double hi) const;

  StepFunction scaled(double factor) const;

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

/// int_lo^hi t^{e-1} dt for 0 <= lo < hi <= inf, with the convergence
/// conditions e > 0 when lo = 0 and e < 0 when hi = inf. Accurate for lo
/// close to hi.
double power_segment(double e, double lo, double hi);

}  // namespace agf
