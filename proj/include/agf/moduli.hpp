#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "agf/grid.hpp"

namespace agf {

/// A modulus of continuity omega(delta) stored through omega^p, which is
/// piecewise linear between breakpoints and constant after the last one.
/// For piecewise-constant grid functions this representation is exact.
class ModulusCurve {
 public:
  ModulusCurve() = default;
  /// deltas[0] must be 0; omegas are omega(delta_i) (not raised to p).
  ModulusCurve(double p, std::vector<double> deltas, std::vector<double> omegas, std::size_t axis = 0);

  double operator()(double delta) const;
  double p() const { return p_; }
  std::size_t axis() const { return axis_; }
  std::span<const double> deltas() const { return deltas_; }
  std::span<const double> omegas() const { return omegas_; }
  std::span<const double> omega_powers() const { return powers_; }
  /// First positive breakpoint (the cell size for grid-derived curves).
  double finest_scale() const;
  double saturation() const { return omegas_.empty() ? 0.0 : omegas_.back(); }
  bool is_zero() const;

 private:
  double p_ = 1.0;
  std::size_t axis_ = 0;
  std::vector<double> deltas_;
  std::vector<double> omegas_;
  std::vector<double> powers_;
};

/// Exact shift-difference profile h -> I_k(f; h)_p along one axis.
///
/// With h = m c_k + s, 0 <= s < c_k, the identity
///   I^p(h) = ((c_k - s)/c_k) I^p(m c_k) + (s/c_k) I^p((m+1) c_k)
/// holds for piecewise-constant functions, so the lattice values determine
/// the whole profile.
class ShiftProfile {
 public:
  ShiftProfile(const GridFunction& f, std::size_t axis, double p);

  double power(double h) const;   // I^p(h)
  double norm(double h) const;    // I(h)
  double modulus(double delta) const;
  /// int_0^delta I(h) dh, exact.
  double integral_of_norm(double delta) const;
  ModulusCurve curve() const;

  double cell() const { return cell_; }
  double p() const { return p_; }
  std::size_t axis() const { return axis_; }
  std::span<const double> lattice_powers() const { return lattice_; }

 private:
  std::size_t axis_;
  double p_;
  double cell_;
  std::vector<double> lattice_;  // I^p(m c), m = 0..N
  std::vector<double> running_max_;
};

double shift_difference_norm(const GridFunction& f, std::size_t axis, double h, double p);
double partial_modulus(const GridFunction& f, std::size_t axis, double delta, double p);
ModulusCurve modulus_curve(const GridFunction& f, std::size_t axis, double p);

/// f_{h,j}(x) = (1/h) int_0^h f(x + u e_j) du for h = m c_j. Along axis j the
/// mean is continuous and piecewise linear between cell boundaries, so it is
/// stored through its nodal values there.
class SteklovMean {
 public:
  SteklovMean(const GridFunction& f, double h, std::size_t axis);

  std::size_t axis() const { return axis_; }
  double h() const { return h_; }
  std::size_t window_cells() const { return window_; }
  double value_at(std::span<const double> x) const;
  /// ||f - f_{h,j}||_p, exact (closed form on every cell).
  double lp_distance(double p) const;
  /// Cell averages of the mean on its (extended) grid.
  GridFunction cell_averages() const;

 private:
  double node_value(std::span<const std::size_t> other, long node) const;
  double source_value(std::span<const std::size_t> other, long cell) const;

  GridFunction f_;
  std::size_t axis_;
  double h_;
  std::size_t window_;
  long first_node_;
  std::size_t node_count_;
  std::vector<double> nodes_;  // row-major with the axis extent replaced by node_count_
};

SteklovMean steklov_mean(const GridFunction& f, double h, std::size_t axis);

/// |d f_{h,j} / d x_j| = |f(x + h e_j) - f(x)| / h as a grid function.
GridFunction steklov_axis_derivative(const GridFunction& f, double h, std::size_t axis);

struct AxiomLine {
  std::string name;
  double worst_ratio = 0.0;  // <= 1 + tol passes
  bool pass = true;
};

struct AxiomsReport {
  std::vector<AxiomLine> lines;
  bool all_pass() const;
  bool passes(const std::string& name) const;
  std::string str() const;  // one "name worst_ratio verdict" line per axiom
};

/// Checks monotonicity, omega(0) = 0, subadditivity (d1), doubling (d2),
/// quasi-monotonicity of omega/delta (d3) and agreement of the finest-scale
/// slope with the sup slope (d4) on the dyadic grid delta_min * 2^i.
AxiomsReport modulus_axioms_check(const ModulusCurve& curve, double delta_min, int levels,
                                  double tol = 1e-9);

}  // namespace agf
