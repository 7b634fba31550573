#include "agf/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agf/error.hpp"

namespace agf {

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values) {
  if (breakpoints.size() != values.size())
    throw ValidationError("step function needs one value per breakpoint");
  double prev = 0.0;
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    const double t = breakpoints[i];
    const double v = values[i];
    if (!(t > prev) || !std::isfinite(t))
      throw ValidationError("step breakpoints must be finite, positive and strictly increasing");
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("step values must be finite and nonnegative");
    prev = t;
    if (!values_.empty() && values_.back() == v) {
      breaks_.back() = t;
    } else {
      breaks_.push_back(t);
      values_.push_back(v);
    }
  }
  while (!values_.empty() && values_.back() == 0.0) {
    values_.pop_back();
    breaks_.pop_back();
  }
}

double StepFunction::operator()(double t) const {
  if (breaks_.empty()) return 0.0;
  if (t <= 0.0) return values_.front();
  auto it = std::lower_bound(breaks_.begin(), breaks_.end(), t);
  if (it == breaks_.end()) return 0.0;
  return values_[static_cast<std::size_t>(it - breaks_.begin())];
}

bool StepFunction::is_nonincreasing() const {
  for (std::size_t i = 1; i < values_.size(); ++i)
    if (values_[i] > values_[i - 1]) return false;
  return true;
}

double StepFunction::measure_above(double y) const {
  double m = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (values_[i] > y) m += breaks_[i] - prev;
    prev = breaks_[i];
  }
  return m;
}

double power_segment(double e, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  if (std::isinf(hi)) {
    if (!(e < 0.0)) return std::numeric_limits<double>::infinity();
    return -std::pow(lo, e) / e;
  }
  if (lo == 0.0) {
    if (!(e > 0.0)) return std::numeric_limits<double>::infinity();
    return std::pow(hi, e) / e;
  }
  const double L = std::log(hi / lo);
  if (e == 0.0) return L;
  return std::pow(lo, e) * std::expm1(e * L) / e;
}

double StepFunction::power_integral(double a, double r, double lo, double hi) const {
  if (!(hi > lo)) return 0.0;
  double s = 0.0, left = 0.0;
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    const double right = breaks_[i];
    const double a0 = std::max(left, lo), b0 = std::min(right, hi);
    left = right;
    if (!(b0 > a0) || values_[i] == 0.0) continue;
    s += std::pow(values_[i], r) * power_segment(a, a0, b0);
  }
  return s;
}

double StepFunction::weighted_sup(double a, double lo, double hi) const {
  double best = 0.0, left = 0.0;
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    const double right = breaks_[i];
    const double a0 = std::max(left, lo), b0 = std::min(right, hi);
    left = right;
    if (!(b0 > a0) || values_[i] == 0.0) continue;
    // t^a is monotone on the piece: increasing for a >= 0, otherwise the
    // sup sits at the open left end.
    const double t = a >= 0.0 ? b0 : a0;
    const double w = t == 0.0 ? (a == 0.0 ? 1.0 : std::numeric_limits<double>::infinity()) : std::pow(t, a);
    best = std::max(best, w * values_[i]);
  }
  return best;
}

StepFunction StepFunction::scaled(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return StepFunction(breaks_, std::move(v));
}

}  // namespace agf
