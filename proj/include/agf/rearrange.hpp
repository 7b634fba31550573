#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "agf/grid.hpp"
#include "agf/step_function.hpp"

namespace agf {

/// Order in which axes are rearranged: order()[0] first. Axes are 0-based.
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> order);
  static Permutation identity(std::size_t n);
  /// All n! permutations in lexicographic order.
  static std::vector<Permutation> all(std::size_t n);

  std::size_t size() const { return order_.size(); }
  std::span<const std::size_t> order() const { return order_; }
  std::size_t operator[](std::size_t i) const { return order_[i]; }
  std::string str() const;  // e.g. "0-1"

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> order_;
};

/// lambda_f(y) = v * #{cells : value > y}.
double distribution(const GridFunction& f, double y);

/// f* as an exact step function: cell values sorted descending with
/// breakpoints at cumulative cell measures.
StepFunction decreasing_rearrangement(const GridFunction& f);

/// Each 1-D section along `axis` sorted nonincreasingly; the axis is then
/// anchored at 0 and becomes a half line (intervals stay intervals).
GridFunction axis_rearrangement(const GridFunction& f, std::size_t axis);

/// R_sigma f = R_{k_n} ... R_{k_1} f.
GridFunction iterated_rearrangement(const GridFunction& f, const Permutation& sigma);

/// Nonincreasing in every variable on the grid.
bool is_mdec(const GridFunction& f);

/// Strict total order on the support of an M_dec function.
///
/// `order` lists the support cells by value descending, ties broken by flat
/// index ascending (lexicographic). `jittered` adds eta * (support - rank)
/// to each support cell, with eta below half the smallest value gap divided
/// by the cell count, so jittered values are pairwise distinct and strictly
/// decreasing in each variable. Norms are always taken from `original`.
struct StrictifiedFunction {
  GridFunction original;
  GridFunction jittered;
  std::vector<std::size_t> order;
  double eta = 0.0;
};

StrictifiedFunction strictify(const GridFunction& f);

/// t -> g(t) - g(2t) for a nonincreasing step function g.
StepFunction dyadic_decrement(const StepFunction& g);

}  // namespace agf
