#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version (namespace
// agf::kernels) and a plain serial reference (agf::kernels::serial) kept for
// tests and benchmarks. Parallel versions fix their summation order
// independently of the thread count, so results are bit-identical for any
// OMP_NUM_THREADS.

#include <cstddef>
#include <span>
#include <vector>

#include "agf/grid.hpp"

namespace agf::kernels {

inline constexpr std::size_t kSumBlock = 2048;

/// Sum of term(i) for i in [0, count): fixed blocks of kSumBlock terms are
/// summed in parallel, then the block partials are added in index order.
template <class Term>
double ordered_sum(std::size_t count, Term&& term) {
  const std::size_t blocks = (count + kSumBlock - 1) / kSumBlock;
  if (blocks <= 1) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += term(i);
    return s;
  }
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kSumBlock;
    const std::size_t hi = lo + kSumBlock < count ? lo + kSumBlock : count;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double s = 0.0;
  for (double x : partial) s += x;
  return s;
}

/// |x|^p with fast paths for p = 1 and p = 2.
double abs_pow(double x, double p);

/// S_m = v * sum |f(x + m e_k) - f(x)|^p for m = 0..N_k, over the x allowed
/// by the axis domain (see AxisDomain). Entry m is I_k(f; m c_k)^p.
std::vector<double> axis_shift_power_sums(const GridFunction& f, std::size_t axis, double p);

/// Sorts every 1-D section along `axis` in nonincreasing order, in place.
void sort_sections_descending(std::span<double> values, std::span<const std::size_t> shape,
                              std::size_t axis);

/// Table of I(f; m . c)^p for integer shift vectors m with |m_k| <= N_k, all
/// axes on the line. Index: row-major over (m_k + N_k) with extents 2 N_k + 1.
std::vector<double> lattice_shift_power_table(const GridFunction& f, double p);

namespace serial {

std::vector<double> axis_shift_power_sums(const GridFunction& f, std::size_t axis, double p);
void sort_sections_descending(std::span<double> values, std::span<const std::size_t> shape,
                              std::size_t axis);
std::vector<double> lattice_shift_power_table(const GridFunction& f, double p);

}  // namespace serial

/// Number of OpenMP threads the kernels will use.
int max_threads();
void set_threads(int threads);

}  // namespace agf::kernels
