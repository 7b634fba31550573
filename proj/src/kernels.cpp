#include "agf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <omp.h>

#include "agf/error.hpp"

namespace agf::kernels {

double abs_pow(double x, double p) {
  const double a = std::fabs(x);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return std::pow(a, p);
}

int max_threads() { return omp_get_max_threads(); }

void set_threads(int threads) {
  if (threads < 1) throw ParameterError("thread count must be positive");
  omp_set_num_threads(threads);
}

namespace {

// Flat indices of the first cell of every section along `axis`, ascending.
std::vector<std::size_t> section_bases(std::span<const std::size_t> shape, std::size_t axis) {
  const std::size_t n = shape.size();
  std::size_t total = 1;
  for (auto e : shape) total *= e;
  std::vector<std::size_t> strides(n, 1);
  for (std::size_t k = n - 1; k > 0; --k) strides[k - 1] = strides[k] * shape[k];
  std::vector<std::size_t> bases;
  bases.reserve(total / shape[axis]);
  for (std::size_t flat = 0; flat < total; ++flat)
    if ((flat / strides[axis]) % shape[axis] == 0) bases.push_back(flat);
  return bases;
}

double section_shift_sum(const double* f, std::size_t stride, std::size_t N, std::size_t m,
                         AxisDomain dom, double p) {
  double s = 0.0;
  const std::size_t overlap = m < N ? N - m : 0;
  for (std::size_t i = 0; i < overlap; ++i) s += abs_pow(f[(i + m) * stride] - f[i * stride], p);
  if (dom == AxisDomain::interval) return s;
  // x + m e_k falls beyond the grid end
  for (std::size_t i = overlap; i < N; ++i) s += abs_pow(f[i * stride], p);
  if (dom == AxisDomain::half_line) return s;
  // x below the grid start, x + m e_k inside
  const std::size_t below = m < N ? m : N;
  for (std::size_t j = 0; j < below; ++j) s += abs_pow(f[j * stride], p);
  return s;
}

// Odometer over the box prod_k [lo_k, hi_k).
template <class Visit>
void for_each_in_box(std::span<const long> lo, std::span<const long> hi, Visit&& visit) {
  const std::size_t n = lo.size();
  for (std::size_t k = 0; k < n; ++k)
    if (lo[k] >= hi[k]) return;
  std::vector<long> idx(lo.begin(), lo.end());
  while (true) {
    visit(std::span<const long>(idx));
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++idx[k] < hi[k]) break;
      idx[k] = lo[k];
      if (k == 0) return;
    }
  }
}

std::vector<long> lattice_extents(const GridFunction& f) {
  std::vector<long> ext(f.dims());
  for (std::size_t k = 0; k < f.dims(); ++k) ext[k] = 2 * static_cast<long>(f.shape()[k]) + 1;
  return ext;
}

std::vector<long> unravel_shift(std::size_t flat, std::span<const long> ext,
                                std::span<const std::size_t> shape) {
  const std::size_t n = ext.size();
  std::vector<long> m(n);
  for (std::size_t k = n; k > 0; --k) {
    const long e = ext[k - 1];
    m[k - 1] = static_cast<long>(flat % static_cast<std::size_t>(e)) - static_cast<long>(shape[k - 1]);
    flat /= static_cast<std::size_t>(e);
  }
  return m;
}

void check_all_line(const GridFunction& f) {
  for (auto d : f.domains())
    if (d != AxisDomain::line) throw ParameterError("lattice shift table requires every axis on the line");
}

}  // namespace

std::vector<double> axis_shift_power_sums(const GridFunction& f, std::size_t axis, double p) {
  if (axis >= f.dims()) throw ParameterError("axis out of range");
  const std::size_t N = f.shape()[axis];
  const std::size_t stride = f.stride(axis);
  const AxisDomain dom = f.domains()[axis];
  const auto bases = section_bases(f.shape(), axis);
  const double* data = f.values().data();
  std::vector<double> out(N + 1, 0.0);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t mm = 0; mm <= static_cast<std::ptrdiff_t>(N); ++mm) {
    const auto m = static_cast<std::size_t>(mm);
    double s = 0.0;
    for (std::size_t b : bases) s += section_shift_sum(data + b, stride, N, m, dom, p);
    out[m] = s * f.cell_volume();
  }
  return out;
}

void sort_sections_descending(std::span<double> values, std::span<const std::size_t> shape,
                              std::size_t axis) {
  const std::size_t N = shape[axis];
  std::size_t stride = 1;
  for (std::size_t k = axis + 1; k < shape.size(); ++k) stride *= shape[k];
  const auto bases = section_bases(shape, axis);
#pragma omp parallel
  {
    std::vector<double> buf(N);
#pragma omp for schedule(static)
    for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(bases.size()); ++s) {
      double* sec = values.data() + bases[static_cast<std::size_t>(s)];
      for (std::size_t i = 0; i < N; ++i) buf[i] = sec[i * stride];
      std::sort(buf.begin(), buf.end(), std::greater<>());
      for (std::size_t i = 0; i < N; ++i) sec[i * stride] = buf[i];
    }
  }
}

std::vector<double> lattice_shift_power_table(const GridFunction& f, double p) {
  check_all_line(f);
  const std::size_t n = f.dims();
  const auto ext = lattice_extents(f);
  std::size_t total = 1;
  for (long e : ext) total *= static_cast<std::size_t>(e);
  const double power_total = lp_power_sum(f, p) / f.cell_volume();
  const double* data = f.values().data();
  std::vector<double> table(total, 0.0);
  // L(-m) = L(m): the flat index of -m is total - 1 - flat(m).
  const std::size_t half = total / 2;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t ss = 0; ss <= static_cast<std::ptrdiff_t>(half); ++ss) {
    const auto s = static_cast<std::size_t>(ss);
    const auto m = unravel_shift(s, ext, f.shape());
    std::vector<long> lo(n), hi(n);
    long offset = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const long N = static_cast<long>(f.shape()[k]);
      lo[k] = std::max(0L, -m[k]);
      hi[k] = std::min(N, N - m[k]);
      offset += m[k] * static_cast<long>(f.stride(k));
    }
    double acc = 0.0;
    for_each_in_box(lo, hi, [&](std::span<const long> x) {
      std::size_t flat = 0;
      for (std::size_t k = 0; k < n; ++k) flat += static_cast<std::size_t>(x[k]) * f.stride(k);
      const double a = data[flat];
      const double b = data[static_cast<std::size_t>(static_cast<long>(flat) + offset)];
      acc += abs_pow(b - a, p) - abs_pow(a, p) - abs_pow(b, p);
    });
    const double value = (acc + 2.0 * power_total) * f.cell_volume();
    table[s] = value;
    table[total - 1 - s] = value;
  }
  return table;
}

namespace serial {

std::vector<double> axis_shift_power_sums(const GridFunction& f, std::size_t axis, double p) {
  if (axis >= f.dims()) throw ParameterError("axis out of range");
  const long N = static_cast<long>(f.shape()[axis]);
  const AxisDomain dom = f.domains()[axis];
  auto value = [&](std::vector<std::size_t> idx, long pos) {
    if (pos < 0 || pos >= N) return 0.0;
    idx[axis] = static_cast<std::size_t>(pos);
    return f.at(idx);
  };
  std::vector<double> out(static_cast<std::size_t>(N) + 1, 0.0);
  for (long m = 0; m <= N; ++m) {
    double s = 0.0;
    for (std::size_t flat = 0; flat < f.cell_count(); ++flat) {
      auto idx = f.unravel(flat);
      if (idx[axis] != 0) continue;
      long lo = dom == AxisDomain::line ? -m : 0;
      long hi = dom == AxisDomain::interval ? N - m : N;
      for (long i = lo; i < hi; ++i) s += abs_pow(value(idx, i + m) - value(idx, i), p);
    }
    out[static_cast<std::size_t>(m)] = s * f.cell_volume();
  }
  return out;
}

void sort_sections_descending(std::span<double> values, std::span<const std::size_t> shape,
                              std::size_t axis) {
  const std::size_t N = shape[axis];
  std::size_t stride = 1;
  for (std::size_t k = axis + 1; k < shape.size(); ++k) stride *= shape[k];
  std::vector<double> buf(N);
  for (std::size_t b : section_bases(shape, axis)) {
    for (std::size_t i = 0; i < N; ++i) buf[i] = values[b + i * stride];
    std::sort(buf.begin(), buf.end(), std::greater<>());
    for (std::size_t i = 0; i < N; ++i) values[b + i * stride] = buf[i];
  }
}

std::vector<double> lattice_shift_power_table(const GridFunction& f, double p) {
  check_all_line(f);
  const std::size_t n = f.dims();
  const auto ext = lattice_extents(f);
  std::size_t total = 1;
  for (long e : ext) total *= static_cast<std::size_t>(e);
  auto value = [&](std::span<const long> x) {
    std::vector<std::size_t> idx(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (x[k] < 0 || x[k] >= static_cast<long>(f.shape()[k])) return 0.0;
      idx[k] = static_cast<std::size_t>(x[k]);
    }
    return f.at(idx);
  };
  std::vector<double> table(total);
  for (std::size_t s = 0; s < total; ++s) {
    const auto m = unravel_shift(s, ext, f.shape());
    std::vector<long> lo(n), hi(n);
    for (std::size_t k = 0; k < n; ++k) {
      lo[k] = std::min(0L, -m[k]);
      hi[k] = static_cast<long>(f.shape()[k]) + std::max(0L, -m[k]);
    }
    double acc = 0.0;
    std::vector<long> y(n);
    for_each_in_box(lo, hi, [&](std::span<const long> x) {
      for (std::size_t k = 0; k < n; ++k) y[k] = x[k] + m[k];
      acc += abs_pow(value(y) - value(x), p);
    });
    table[s] = acc * f.cell_volume();
  }
  return table;
}

}  // namespace serial
}  // namespace agf::kernels
