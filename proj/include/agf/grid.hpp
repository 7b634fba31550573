#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace agf {

/// How a grid axis is embedded in the real line.
///
///  - line:      the axis is all of R; values are zero outside the grid.
///  - half_line: the axis is R_+ = [origin, inf); zero beyond the grid end,
///               nothing below the origin. Rearranged functions live here.
///  - interval:  the axis is exactly the grid extent [origin, origin + N c].
enum class AxisDomain { line, half_line, interval };

const char* to_string(AxisDomain d);

/// Nonnegative piecewise-constant function on a uniform n-dimensional grid.
///
/// Cell (i_0, ..., i_{n-1}) covers prod_k [o_k + i_k c_k, o_k + (i_k + 1) c_k).
/// Values are stored row-major (last axis fastest). The function is zero
/// outside the grid. Instances are immutable once built.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(std::vector<std::size_t> shape, std::vector<double> cell_sizes,
               std::vector<double> origin, std::vector<double> values,
               std::vector<AxisDomain> domains = {});

  std::size_t dims() const { return shape_.size(); }
  std::span<const std::size_t> shape() const { return shape_; }
  std::span<const double> cell_sizes() const { return cell_sizes_; }
  std::span<const double> origin() const { return origin_; }
  std::span<const double> values() const { return values_; }
  std::span<const AxisDomain> domains() const { return domains_; }

  std::size_t cell_count() const { return values_.size(); }
  double cell_volume() const { return cell_volume_; }
  /// Volume of a cell face orthogonal to `axis` (product of the other sizes).
  double face_volume(std::size_t axis) const;
  std::size_t stride(std::size_t axis) const { return strides_[axis]; }

  std::size_t support_cells() const { return support_cells_; }
  double support_measure() const { return static_cast<double>(support_cells_) * cell_volume_; }
  double max_value() const;

  double operator[](std::size_t flat) const { return values_[flat]; }
  double at(std::span<const std::size_t> index) const;
  std::size_t ravel(std::span<const std::size_t> index) const;
  std::vector<std::size_t> unravel(std::size_t flat) const;

  /// Same geometry, new values.
  GridFunction with_values(std::vector<double> values) const;
  GridFunction with_domains(std::vector<AxisDomain> domains) const;
  GridFunction with_origin(std::vector<double> origin) const;
  GridFunction scaled(double factor) const;

  bool same_geometry(const GridFunction& other) const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> cell_sizes_;
  std::vector<double> origin_;
  std::vector<double> values_;
  std::vector<AxisDomain> domains_;
  std::vector<std::size_t> strides_;
  double cell_volume_ = 0.0;
  std::size_t support_cells_ = 0;
};

/// Validating constructor. Throws ValidationError on negative or non-finite
/// values, nonpositive cell sizes, or inconsistent shapes.
GridFunction make_grid_function(std::vector<std::size_t> shape, std::vector<double> values,
                                std::vector<double> cell_sizes,
                                std::vector<double> origin = {});

/// (sum_cells value^p * v)^{1/p}. Summation order is fixed, so the result
/// does not depend on the thread count.
double lp_norm(const GridFunction& f, double p);

/// sum_cells value^p * v, without the final root.
double lp_power_sum(const GridFunction& f, double p);

}  // namespace agf
