#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agf/grid.hpp"
#include "agf/rearrange.hpp"
#include "agf/report.hpp"

namespace agf {

/// Finite set of grid cells, optionally with one extra boundary cell counted
/// with a fractional weight in (0, 1).
class CellSet {
 public:
  CellSet() = default;
  CellSet(std::vector<std::size_t> shape, std::vector<double> cell_sizes, std::vector<std::size_t> cells,
          std::optional<std::size_t> boundary = std::nullopt, double fraction = 0.0);
  static CellSet from_mask(std::vector<std::size_t> shape, std::vector<double> cell_sizes,
                           const std::vector<bool>& mask);

  std::size_t dims() const { return shape_.size(); }
  std::span<const std::size_t> shape() const { return shape_; }
  std::span<const double> cell_sizes() const { return cell_sizes_; }
  std::span<const std::size_t> cells() const { return cells_; }  // sorted flat indices
  std::size_t count() const { return cells_.size(); }
  bool empty() const { return cells_.empty() && !boundary_; }
  std::optional<std::size_t> boundary_cell() const { return boundary_; }
  double boundary_fraction() const { return fraction_; }
  bool has_fraction() const { return boundary_.has_value(); }
  bool contains(std::size_t flat) const;
  double cell_volume() const;
  double measure() const;
  std::size_t coordinate(std::size_t flat, std::size_t axis) const;
  std::string str() const;  // index list for audit dumps

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> cell_sizes_;
  std::vector<std::size_t> cells_;
  std::optional<std::size_t> boundary_;
  double fraction_ = 0.0;
};

/// Sections of a set along one axis. A column is keyed by the flat index of
/// its cells with the axis coordinate set to 0.
struct ProjectionColumn {
  std::size_t key = 0;
  std::size_t cells = 0;     // whole cells in the column
  double fraction = 0.0;     // boundary-cell weight falling in the column
  double section = 0.0;      // 1-D measure of the section
};

struct ProjectionProfile {
  std::size_t axis = 0;
  double face_volume = 0.0;  // (n-1)-dimensional measure of one column's base
  std::vector<ProjectionColumn> columns;  // sorted by key, nonempty only

  /// Columns times face volume; a fractional cell counts as a full column.
  double projection_measure() const { return static_cast<double>(columns.size()) * face_volume; }
  double total_measure() const;
};

ProjectionProfile projection_profile(const CellSet& e, std::size_t axis);

/// (mes E)^{n-1} <= prod_k mes Pi_k(E), decided in exact integer arithmetic
/// on cell and column counts. lhs/rhs are reported in units of v^{n-1}.
InequalityReport loomis_whitney_check(const CellSet& e, const std::string& function_id = "");

/// E_0 = E and, for j = 1..n, E_j = the fewest whole columns of E_{j-1}
/// along axis j-1 (largest sections first, ties by key) whose measure reaches
/// the target 2^{-j} |E_0|.
struct ProjectionChain {
  std::vector<CellSet> sets;                // n + 1 sets
  std::vector<double> targets;              // targets[j] for sets[j]
  std::vector<double> projection_measures;  // entry j-1: mes Pi_{j-1}(E_j)
};

ProjectionChain minimal_projection_chain(const CellSet& e);

/// Cells of one selection step: columns of `e` along `axis` taken greedily
/// until the measure reaches `target`.
CellSet select_columns(const CellSet& e, std::size_t axis, double target);

/// E_t: the first t/v cells of the strict order. t must be a lattice multiple
/// of v and at most the support measure.
CellSet superlevel_filling(const StrictifiedFunction& g, double t);

enum class TGrid { even_lattice, dyadic };
const char* to_string(TGrid g);

struct GaugePoint {
  double t = 0.0;
  bool degenerate = false;            // t beyond the support measure
  double g_measure = 0.0;             // |G_t|
  std::vector<double> mu;             // mu_j(t)
  std::vector<double> u;              // u_j(t) = t / mu_j(t)
  std::vector<double> achieved;       // |G_{t,j}|, j = 1..n (entry j-1)
  std::vector<double> projection;     // mes Pi_{j-1}(G_{t,j})
  bool lw_holds = true;               // Loomis-Whitney on G_t and every chain set
  double lw_worst = 0.0;              // largest count^{n-1} / prod columns seen
  ProjectionChain chain;              // kept only on request
};

/// u_j and mu_j on a lattice of t values, for g = strictify(R_sigma f).
/// Between lattice points u_j is taken constant on (t_{m-1}, t_m].
struct AnisotropicGauge {
  Permutation sigma{std::vector<std::size_t>{0}};
  std::size_t dims = 0;
  double cell_volume = 0.0;
  double support_measure = 0.0;
  TGrid grid = TGrid::even_lattice;
  std::vector<GaugePoint> points;

  /// Index of the lattice point whose interval (t_{m-1}, t_m] contains t, or
  /// points.size() if t lies beyond the last point.
  std::size_t locate(double t) const;
  double u(std::size_t axis, double t) const;
  bool in_omega(std::size_t axis, double t, double h) const { return u(axis, t) >= h; }
  /// prod_j u_j(t_m) <= t_m at every nondegenerate point.
  bool product_bound_holds(double tol = 1e-12) const;
  void write_csv(std::ostream& out) const;
};

/// Even lattice: t = 2v m for m = 1 .. floor(S/2), S the support cell count
/// (a single degenerate point t = 2v when S < 2). Dyadic: t = 2v 2^i <= S v.
AnisotropicGauge build_gauge(const GridFunction& f, const Permutation& sigma, TGrid grid = TGrid::even_lattice,
                             bool keep_chains = false);

/// Average of phi over Q(x) = prod [x_k/2, x_k]. phi lives on R_+^n (origin
/// >= 0); every x_k must be positive.
double box_average(const GridFunction& phi, std::span<const double> x);
/// T phi evaluated at the upper corner of every cell.
GridFunction box_average_field(const GridFunction& phi);

/// Both sides of int (T phi)^r pi^a dx <= C int phi^r pi^a dx over R_+^n,
/// without the constant.
struct OperatorIntegrals {
  double lhs = 0.0;
  double rhs = 0.0;
};
OperatorIntegrals box_operator_integrals(const GridFunction& phi, double r, double a);

}  // namespace agf
