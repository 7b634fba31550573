#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "agf/corpus.hpp"
#include "agf/grid.hpp"

namespace agf::test {

inline GridFunction line1d(std::vector<double> values, double cell = 1.0) {
  const std::size_t n = values.size();
  return make_grid_function({n}, std::move(values), {cell});
}

/// Uniform values in [0, 1) with a share of exact zeros and repeated levels,
/// so ties and empty cells both occur.
inline GridFunction random_grid(std::vector<std::size_t> shape, std::uint64_t seed, std::vector<double> cells = {}) {
  std::mt19937_64 rng(seed);
  std::size_t total = 1;
  for (auto e : shape) total *= e;
  std::vector<double> v(total);
  for (auto& x : v) {
    const double u = unit_uniform(rng());
    x = u < 0.2 ? 0.0 : (u < 0.4 ? 0.5 : unit_uniform(rng()));
  }
  if (cells.empty())
    for (auto e : shape) cells.push_back(1.0 / static_cast<double>(e));
  return make_grid_function(std::move(shape), std::move(v), std::move(cells));
}

}  // namespace agf::test
