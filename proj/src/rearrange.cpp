#include "agf/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "agf/error.hpp"
#include "agf/kernels.hpp"

namespace agf {

Permutation::Permutation(std::vector<std::size_t> order) : order_(std::move(order)) {
  std::vector<bool> seen(order_.size(), false);
  for (std::size_t k : order_) {
    if (k >= order_.size() || seen[k]) throw ParameterError("not a permutation of the axes");
    seen[k] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> o(n);
  std::iota(o.begin(), o.end(), 0);
  return Permutation(std::move(o));
}

std::vector<Permutation> Permutation::all(std::size_t n) {
  std::vector<std::size_t> o(n);
  std::iota(o.begin(), o.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(o);
  } while (std::next_permutation(o.begin(), o.end()));
  return out;
}

std::string Permutation::str() const {
  std::string s;
  for (std::size_t i = 0; i < order_.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(order_[i]);
  }
  return s;
}

double distribution(const GridFunction& f, double y) {
  if (!(y >= 0.0)) throw ParameterError("distribution level must be nonnegative");
  std::size_t count = 0;
  for (double v : f.values())
    if (v > y) ++count;
  return static_cast<double>(count) * f.cell_volume();
}

StepFunction decreasing_rearrangement(const GridFunction& f) {
  std::vector<double> sorted;
  sorted.reserve(f.support_cells());
  for (double v : f.values())
    if (v > 0.0) sorted.push_back(v);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<double> breaks, values;
  const double v = f.cell_volume();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    // Merge runs of equal values; breakpoints are integer multiples of v.
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    breaks.push_back(static_cast<double>(i + 1) * v);
    values.push_back(sorted[i]);
  }
  return StepFunction(std::move(breaks), std::move(values));
}

GridFunction axis_rearrangement(const GridFunction& f, std::size_t axis) {
  if (axis >= f.dims()) throw ParameterError("axis out of range");
  std::vector<double> values(f.values().begin(), f.values().end());
  kernels::sort_sections_descending(values, f.shape(), axis);
  std::vector<double> origin(f.origin().begin(), f.origin().end());
  std::vector<AxisDomain> dom(f.domains().begin(), f.domains().end());
  origin[axis] = 0.0;
  if (dom[axis] == AxisDomain::line) dom[axis] = AxisDomain::half_line;
  return GridFunction({f.shape().begin(), f.shape().end()}, {f.cell_sizes().begin(), f.cell_sizes().end()},
                      std::move(origin), std::move(values), std::move(dom));
}

GridFunction iterated_rearrangement(const GridFunction& f, const Permutation& sigma) {
  if (sigma.size() != f.dims()) throw ParameterError("permutation size does not match dimension");
  GridFunction g = f;
  for (std::size_t k : sigma.order()) g = axis_rearrangement(g, k);
  return g;
}

bool is_mdec(const GridFunction& f) {
  const auto vals = f.values();
  for (std::size_t flat = 0; flat < f.cell_count(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t k = 0; k < f.dims(); ++k) {
      const std::size_t i = (rem / f.stride(k)) % f.shape()[k];
      if (i + 1 < f.shape()[k] && vals[flat + f.stride(k)] > vals[flat]) return false;
    }
  }
  return true;
}

StrictifiedFunction strictify(const GridFunction& f) {
  if (!is_mdec(f)) throw PreconditionError("strictify requires a function nonincreasing in every variable");
  const auto vals = f.values();
  std::vector<std::size_t> order;
  order.reserve(f.support_cells());
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (vals[i] > 0.0) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });

  // Smallest gap among distinct support values, counting the gap to zero.
  double gap = order.empty() ? 1.0 : vals[order.back()];
  for (std::size_t r = 1; r < order.size(); ++r) {
    const double d = vals[order[r - 1]] - vals[order[r]];
    if (d > 0.0) gap = std::min(gap, d);
  }
  const double eta = gap / (2.0 * static_cast<double>(std::max<std::size_t>(vals.size(), 1)) + 2.0);
  std::vector<double> jit(vals.begin(), vals.end());
  const std::size_t s = order.size();
  for (std::size_t r = 0; r < s; ++r) jit[order[r]] += eta * static_cast<double>(s - r);
  return StrictifiedFunction{f, f.with_values(std::move(jit)), std::move(order), eta};
}

StepFunction dyadic_decrement(const StepFunction& g) {
  if (!g.is_nonincreasing()) throw PreconditionError("dyadic decrement expects a nonincreasing step function");
  std::vector<double> pts;
  for (double t : g.breakpoints()) {
    pts.push_back(t);
    pts.push_back(0.5 * t);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  // On (a, b] between consecutive points both g(t) and g(2t) are constant;
  // left-continuity lets us read them at the right end b.
  std::vector<double> values;
  values.reserve(pts.size());
  for (double b : pts) values.push_back(std::max(0.0, g(b) - g(2.0 * b)));
  return StepFunction(std::move(pts), std::move(values));
}

}  // namespace agf
