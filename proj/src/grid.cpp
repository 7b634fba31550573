#include "agf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "agf/error.hpp"
#include "agf/kernels.hpp"

namespace agf {

const char* to_string(AxisDomain d) {
  switch (d) {
    case AxisDomain::line: return "line";
    case AxisDomain::half_line: return "half_line";
    case AxisDomain::interval: return "interval";
  }
  return "?";
}

GridFunction::GridFunction(std::vector<std::size_t> shape, std::vector<double> cell_sizes,
                           std::vector<double> origin, std::vector<double> values,
                           std::vector<AxisDomain> domains)
    : shape_(std::move(shape)),
      cell_sizes_(std::move(cell_sizes)),
      origin_(std::move(origin)),
      values_(std::move(values)),
      domains_(std::move(domains)) {
  const std::size_t n = shape_.size();
  if (n == 0) throw ValidationError("grid must have at least one axis");
  if (cell_sizes_.size() != n) throw ValidationError("cell_sizes length does not match dimension");
  if (origin_.empty()) origin_.assign(n, 0.0);
  if (origin_.size() != n) throw ValidationError("origin length does not match dimension");
  if (domains_.empty()) domains_.assign(n, AxisDomain::line);
  if (domains_.size() != n) throw ValidationError("domains length does not match dimension");

  std::size_t total = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (shape_[k] == 0) throw ValidationError("grid extent must be positive on every axis");
    if (!(cell_sizes_[k] > 0.0) || !std::isfinite(cell_sizes_[k]))
      throw ValidationError("cell sizes must be finite and positive");
    if (!std::isfinite(origin_[k])) throw ValidationError("origin must be finite");
    total *= shape_[k];
  }
  if (values_.size() != total) throw ValidationError("value count does not match shape");

  strides_.assign(n, 1);
  for (std::size_t k = n - 1; k > 0; --k) strides_[k - 1] = strides_[k] * shape_[k];

  cell_volume_ = 1.0;
  for (double c : cell_sizes_) cell_volume_ *= c;
  if (!(cell_volume_ > 0.0)) throw ValidationError("cell volume underflows to zero");

  for (double v : values_) {
    if (!std::isfinite(v)) throw ValidationError("grid values must be finite");
    if (v < 0.0) throw ValidationError("grid values must be nonnegative");
    if (v > 0.0) ++support_cells_;
  }
}

double GridFunction::face_volume(std::size_t axis) const {
  double v = 1.0;
  for (std::size_t k = 0; k < dims(); ++k)
    if (k != axis) v *= cell_sizes_[k];
  return v;
}

double GridFunction::max_value() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

double GridFunction::at(std::span<const std::size_t> index) const { return values_[ravel(index)]; }

std::size_t GridFunction::ravel(std::span<const std::size_t> index) const {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < dims(); ++k) flat += index[k] * strides_[k];
  return flat;
}

std::vector<std::size_t> GridFunction::unravel(std::size_t flat) const {
  std::vector<std::size_t> idx(dims());
  for (std::size_t k = 0; k < dims(); ++k) {
    idx[k] = flat / strides_[k];
    flat %= strides_[k];
  }
  return idx;
}

GridFunction GridFunction::with_values(std::vector<double> values) const {
  return GridFunction(shape_, cell_sizes_, origin_, std::move(values), domains_);
}

GridFunction GridFunction::with_domains(std::vector<AxisDomain> domains) const {
  return GridFunction(shape_, cell_sizes_, origin_, values_, std::move(domains));
}

GridFunction GridFunction::with_origin(std::vector<double> origin) const {
  return GridFunction(shape_, cell_sizes_, std::move(origin), values_, domains_);
}

GridFunction GridFunction::scaled(double factor) const {
  if (!(factor >= 0.0)) throw ParameterError("scale factor must be nonnegative");
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return with_values(std::move(v));
}

bool GridFunction::same_geometry(const GridFunction& other) const {
  return shape_ == other.shape_ && cell_sizes_ == other.cell_sizes_ && origin_ == other.origin_;
}

GridFunction make_grid_function(std::vector<std::size_t> shape, std::vector<double> values,
                                std::vector<double> cell_sizes, std::vector<double> origin) {
  return GridFunction(std::move(shape), std::move(cell_sizes), std::move(origin), std::move(values));
}

double lp_power_sum(const GridFunction& f, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("lp norm requires 1 <= p < inf");
  const auto vals = f.values();
  const double s = kernels::ordered_sum(vals.size(), [&](std::size_t i) { return kernels::abs_pow(vals[i], p); });
  return s * f.cell_volume();
}

double lp_norm(const GridFunction& f, double p) {
  const double s = lp_power_sum(f, p);
  return p == 1.0 ? s : std::pow(s, 1.0 / p);
}

}  // namespace agf
