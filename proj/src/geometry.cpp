#include "agf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "agf/error.hpp"
#include "agf/grid_io.hpp"

namespace agf {

namespace {

std::vector<std::size_t> strides_of(std::span<const std::size_t> shape) {
  std::vector<std::size_t> s(shape.size());
  std::size_t acc = 1;
  for (std::size_t k = shape.size(); k > 0; --k) {
    s[k - 1] = acc;
    acc *= shape[k - 1];
  }
  return s;
}

std::size_t total_of(std::span<const std::size_t> shape) {
  std::size_t t = 1;
  for (auto e : shape) t *= e;
  return t;
}

}  // namespace

// ---------------------------------------------------------------- CellSet

CellSet::CellSet(std::vector<std::size_t> shape, std::vector<double> cell_sizes, std::vector<std::size_t> cells,
                 std::optional<std::size_t> boundary, double fraction)
    : shape_(std::move(shape)), cell_sizes_(std::move(cell_sizes)), cells_(std::move(cells)), boundary_(boundary),
      fraction_(boundary ? fraction : 0.0) {
  if (shape_.empty() || shape_.size() != cell_sizes_.size()) throw ValidationError("cell set geometry mismatch");
  const std::size_t total = total_of(shape_);
  std::sort(cells_.begin(), cells_.end());
  if (std::adjacent_find(cells_.begin(), cells_.end()) != cells_.end())
    throw ValidationError("cell set has duplicate cells");
  if (!cells_.empty() && cells_.back() >= total) throw ValidationError("cell index outside the grid");
  if (boundary_) {
    if (*boundary_ >= total) throw ValidationError("boundary cell outside the grid");
    if (!(fraction_ > 0.0 && fraction_ < 1.0)) throw ValidationError("boundary fraction must lie in (0, 1)");
    if (std::binary_search(cells_.begin(), cells_.end(), *boundary_))
      throw ValidationError("boundary cell is also a whole cell");
  }
}

CellSet CellSet::from_mask(std::vector<std::size_t> shape, std::vector<double> cell_sizes,
                           const std::vector<bool>& mask) {
  if (mask.size() != total_of(shape)) throw ValidationError("mask size does not match the shape");
  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) cells.push_back(i);
  return CellSet(std::move(shape), std::move(cell_sizes), std::move(cells));
}

bool CellSet::contains(std::size_t flat) const { return std::binary_search(cells_.begin(), cells_.end(), flat); }

double CellSet::cell_volume() const {
  double v = 1.0;
  for (double c : cell_sizes_) v *= c;
  return v;
}

double CellSet::measure() const { return cell_volume() * (static_cast<double>(cells_.size()) + fraction_); }

std::size_t CellSet::coordinate(std::size_t flat, std::size_t axis) const {
  return (flat / strides_of(shape_)[axis]) % shape_[axis];
}

std::string CellSet::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < cells_.size(); ++i) os << (i ? " " : "") << cells_[i];
  if (boundary_) os << " [" << *boundary_ << ':' << fraction_ << ']';
  return os.str();
}

// ---------------------------------------------------------------- projections

double ProjectionProfile::total_measure() const {
  double s = 0.0;
  for (const auto& c : columns) s += c.section;
  return s * face_volume;
}

ProjectionProfile projection_profile(const CellSet& e, std::size_t axis) {
  if (axis >= e.dims()) throw ParameterError("axis out of range");
  const auto strides = strides_of(e.shape());
  const std::size_t st = strides[axis], ext = e.shape()[axis];
  auto key_of = [&](std::size_t flat) { return flat - ((flat / st) % ext) * st; };
  std::vector<std::pair<std::size_t, std::size_t>> keyed;
  keyed.reserve(e.count());
  for (std::size_t c : e.cells()) keyed.emplace_back(key_of(c), c);
  std::sort(keyed.begin(), keyed.end());

  ProjectionProfile prof;
  prof.axis = axis;
  prof.face_volume = 1.0;
  for (std::size_t k = 0; k < e.dims(); ++k)
    if (k != axis) prof.face_volume *= e.cell_sizes()[k];
  for (const auto& [key, cell] : keyed) {
    if (prof.columns.empty() || prof.columns.back().key != key) prof.columns.push_back({key, 0, 0.0, 0.0});
    ++prof.columns.back().cells;
  }
  if (auto b = e.boundary_cell()) {
    const std::size_t key = key_of(*b);
    auto it = std::lower_bound(prof.columns.begin(), prof.columns.end(), key,
                               [](const ProjectionColumn& c, std::size_t k) { return c.key < k; });
    if (it == prof.columns.end() || it->key != key) it = prof.columns.insert(it, {key, 0, 0.0, 0.0});
    it->fraction = e.boundary_fraction();
  }
  const double c = e.cell_sizes()[axis];
  for (auto& col : prof.columns) col.section = c * (static_cast<double>(col.cells) + col.fraction);
  return prof;
}

InequalityReport loomis_whitney_check(const CellSet& e, const std::string& function_id) {
  if (e.has_fraction()) throw PreconditionError("Loomis-Whitney check needs a set of whole cells");
  using boost::multiprecision::cpp_int;
  const std::size_t n = e.dims();
  cpp_int lhs = 1, rhs = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) lhs *= e.count();
  std::vector<std::size_t> cols(n);
  for (std::size_t k = 0; k < n; ++k) {
    cols[k] = projection_profile(e, k).columns.size();
    rhs *= cols[k];
  }
  Json params = {{"cells", e.count()}, {"columns", cols}};
  if (e.count() == 0) return make_report("lw", function_id, params, 0.0, 0.0, kHardBudget);
  InequalityReport r =
      make_report("lw", function_id, params, lhs.convert_to<double>(), rhs.convert_to<double>(), kHardBudget);
  r.verdict = lhs <= rhs ? Verdict::pass : Verdict::fail;
  return r;
}

CellSet select_columns(const CellSet& e, std::size_t axis, double target) {
  ProjectionProfile prof = projection_profile(e, axis);
  std::vector<std::size_t> order(prof.columns.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return prof.columns[a].section > prof.columns[b].section;  // keys already ascending
  });
  const double face = prof.face_volume;
  const double slack = 1e-12 * std::max(target, e.cell_volume());
  std::vector<std::size_t> chosen;
  double acc = 0.0;
  for (std::size_t i : order) {
    if (acc >= target - slack) break;
    chosen.push_back(prof.columns[i].key);
    acc += prof.columns[i].section * face;
  }
  std::sort(chosen.begin(), chosen.end());
  const auto strides = strides_of(e.shape());
  const std::size_t st = strides[axis], ext = e.shape()[axis];
  auto key_of = [&](std::size_t flat) { return flat - ((flat / st) % ext) * st; };
  auto picked = [&](std::size_t flat) { return std::binary_search(chosen.begin(), chosen.end(), key_of(flat)); };
  std::vector<std::size_t> cells;
  for (std::size_t c : e.cells())
    if (picked(c)) cells.push_back(c);
  std::optional<std::size_t> b;
  if (e.boundary_cell() && picked(*e.boundary_cell())) b = e.boundary_cell();
  return CellSet({e.shape().begin(), e.shape().end()}, {e.cell_sizes().begin(), e.cell_sizes().end()},
                 std::move(cells), b, b ? e.boundary_fraction() : 0.0);
}

ProjectionChain minimal_projection_chain(const CellSet& e) {
  ProjectionChain ch;
  const std::size_t n = e.dims();
  const double m0 = e.measure();
  ch.sets.push_back(e);
  ch.targets.push_back(m0);
  if (e.empty()) return ch;
  for (std::size_t j = 1; j <= n; ++j) {
    const double target = std::ldexp(m0, -static_cast<int>(j));
    CellSet next = select_columns(ch.sets.back(), j - 1, target);
    ch.projection_measures.push_back(projection_profile(next, j - 1).projection_measure());
    ch.targets.push_back(target);
    ch.sets.push_back(std::move(next));
  }
  return ch;
}

CellSet superlevel_filling(const StrictifiedFunction& g, double t) {
  const GridFunction& f = g.original;
  const double k = t / f.cell_volume();
  const double kr = std::round(k);
  if (!(t > 0.0) || std::fabs(k - kr) > 1e-9 * std::max(1.0, kr))
    throw ParameterError("t must be a positive multiple of the cell volume");
  if (kr > static_cast<double>(g.order.size())) throw ParameterError("t exceeds the support measure");
  std::vector<std::size_t> cells(g.order.begin(), g.order.begin() + static_cast<std::ptrdiff_t>(kr));
  return CellSet({f.shape().begin(), f.shape().end()}, {f.cell_sizes().begin(), f.cell_sizes().end()},
                 std::move(cells));
}

// ---------------------------------------------------------------- gauge

const char* to_string(TGrid g) { return g == TGrid::dyadic ? "dyadic" : "even_lattice"; }

std::size_t AnisotropicGauge::locate(double t) const {
  auto it = std::lower_bound(points.begin(), points.end(), t,
                             [](const GaugePoint& p, double x) { return p.t < x; });
  return static_cast<std::size_t>(it - points.begin());
}

double AnisotropicGauge::u(std::size_t axis, double t) const {
  const std::size_t m = locate(t);
  if (m >= points.size() || points[m].degenerate) return 0.0;
  return points[m].u[axis];
}

bool AnisotropicGauge::product_bound_holds(double tol) const {
  for (const auto& p : points) {
    if (p.degenerate) continue;
    double prod = 1.0;
    for (double x : p.u) prod *= x;
    if (prod > p.t * (1.0 + tol)) return false;
  }
  return true;
}

void AnisotropicGauge::write_csv(std::ostream& out) const {
  out << "t,j,mu_j,u_j,achieved_G_measure_j,projection_measure_j\n";
  for (const auto& p : points) {
    if (p.degenerate) continue;
    for (std::size_t j = 0; j < dims; ++j)
      out << fmt_double(p.t) << ',' << j << ',' << fmt_double(p.mu[j]) << ',' << fmt_double(p.u[j]) << ','
          << fmt_double(p.achieved[j]) << ',' << fmt_double(p.projection[j]) << '\n';
  }
}

AnisotropicGauge build_gauge(const GridFunction& f, const Permutation& sigma, TGrid grid, bool keep_chains) {
  if (sigma.size() != f.dims()) throw ParameterError("permutation size does not match the dimension");
  const StrictifiedFunction g = strictify(iterated_rearrangement(f, sigma));
  AnisotropicGauge gauge;
  gauge.sigma = sigma;
  gauge.dims = f.dims();
  gauge.grid = grid;
  const double v = f.cell_volume();
  gauge.cell_volume = v;
  const std::size_t S = g.order.size();
  gauge.support_measure = static_cast<double>(S) * v;

  std::vector<std::size_t> halves;  // t = 2 v * h
  if (grid == TGrid::even_lattice) {
    for (std::size_t h = 1; 2 * h <= S; ++h) halves.push_back(h);
  } else {
    for (std::size_t h = 1; 2 * h <= S; h *= 2) halves.push_back(h);
  }
  if (halves.empty()) halves.push_back(1);
  gauge.points.resize(halves.size());

  const std::size_t n = f.dims();
  const double scale = std::pow(2.0, (static_cast<double>(n * n) - 1.0) / static_cast<double>(n));
  const std::vector<std::size_t> shape(f.shape().begin(), f.shape().end());
  const std::vector<double> sizes(f.cell_sizes().begin(), f.cell_sizes().end());

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(halves.size()); ++i) {
    GaugePoint& pt = gauge.points[static_cast<std::size_t>(i)];
    const std::size_t h = halves[static_cast<std::size_t>(i)];
    pt.t = 2.0 * v * static_cast<double>(h);
    if (2 * h > S) {
      pt.degenerate = true;
      continue;
    }
    std::vector<std::size_t> cells(g.order.begin() + static_cast<std::ptrdiff_t>(h),
                                   g.order.begin() + static_cast<std::ptrdiff_t>(2 * h));
    CellSet gt(shape, sizes, std::move(cells));
    pt.g_measure = gt.measure();
    ProjectionChain ch = minimal_projection_chain(gt);
    for (std::size_t j = 0; j < n; ++j) {
      pt.achieved.push_back(ch.sets[j + 1].measure());
      pt.projection.push_back(ch.projection_measures[j]);
      pt.mu.push_back(scale * ch.projection_measures[j]);
      pt.u.push_back(pt.t / pt.mu.back());
    }
    for (const CellSet& s : ch.sets) {
      const InequalityReport lw = loomis_whitney_check(s);
      if (lw.verdict == Verdict::fail) pt.lw_holds = false;
      if (lw.verdict != Verdict::degenerate) pt.lw_worst = std::max(pt.lw_worst, lw.ratio);
    }
    if (keep_chains) pt.chain = std::move(ch);
  }
  return gauge;
}

// ---------------------------------------------------------------- operator T

namespace {

void check_half_space(const GridFunction& phi) {
  for (double o : phi.origin())
    if (o < 0.0) throw PreconditionError("operator T acts on functions on R_+^n; origin must be nonnegative");
}

// Overlap fractions of [x/2, x] with the cells of one axis.
struct AxisWeights {
  std::size_t first = 0;
  std::vector<double> w;
};

AxisWeights axis_weights(double x, double origin, double c, std::size_t N) {
  AxisWeights aw;
  const double lo = 0.5 * x, hi = x, len = hi - lo;
  const double a = (lo - origin) / c, b = (hi - origin) / c;
  if (b <= 0.0 || a >= static_cast<double>(N)) return aw;
  const long i0 = std::max(0L, static_cast<long>(std::floor(a)));
  const long i1 = std::min(static_cast<long>(N) - 1, static_cast<long>(std::ceil(b)) - 1);
  aw.first = static_cast<std::size_t>(i0);
  for (long i = i0; i <= i1; ++i) {
    const double cl = origin + static_cast<double>(i) * c, cr = cl + c;
    const double ov = std::min(cr, hi) - std::max(cl, lo);
    aw.w.push_back(ov > 0.0 ? ov / len : 0.0);
  }
  return aw;
}

}  // namespace

double box_average(const GridFunction& phi, std::span<const double> x) {
  check_half_space(phi);
  const std::size_t n = phi.dims();
  if (x.size() != n) throw ParameterError("point dimension mismatch");
  std::vector<AxisWeights> ws(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(x[k] > 0.0)) throw ParameterError("box average needs every coordinate positive");
    ws[k] = axis_weights(x[k], phi.origin()[k], phi.cell_sizes()[k], phi.shape()[k]);
    if (ws[k].w.empty()) return 0.0;
  }
  std::vector<std::size_t> j(n, 0);
  double s = 0.0;
  while (true) {
    double w = 1.0;
    std::size_t flat = 0;
    for (std::size_t k = 0; k < n; ++k) {
      w *= ws[k].w[j[k]];
      flat += (ws[k].first + j[k]) * phi.stride(k);
    }
    s += w * phi[flat];
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++j[k] < ws[k].w.size()) break;
      j[k] = 0;
      if (k == 0) return s;
    }
  }
}

GridFunction box_average_field(const GridFunction& phi) {
  check_half_space(phi);
  std::vector<double> out(phi.cell_count());
  std::vector<double> x(phi.dims());
  for (std::size_t i = 0; i < phi.cell_count(); ++i) {
    const auto idx = phi.unravel(i);
    for (std::size_t k = 0; k < phi.dims(); ++k)
      x[k] = phi.origin()[k] + static_cast<double>(idx[k] + 1) * phi.cell_sizes()[k];
    out[i] = box_average(phi, x);
  }
  return phi.with_values(std::move(out));
}

OperatorIntegrals box_operator_integrals(const GridFunction& phi, double r, double a) {
  check_half_space(phi);
  if (!(r >= 1.0) || std::isinf(r)) throw ParameterError("r must satisfy 1 <= r < inf");
  if (!(a > -1.0)) throw ParameterError("weight exponent must exceed -1");
  const std::size_t n = phi.dims();
  OperatorIntegrals out;

  // Right side in closed form.
  std::vector<std::vector<double>> cellw(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double c = phi.cell_sizes()[k], o = phi.origin()[k];
    for (std::size_t i = 0; i < phi.shape()[k]; ++i) {
      const double lo = o + static_cast<double>(i) * c;
      cellw[k].push_back(power_segment(a + 1.0, lo, lo + c));
    }
  }
  for (std::size_t i = 0; i < phi.cell_count(); ++i) {
    if (phi[i] == 0.0) continue;
    double w = std::pow(phi[i], r);
    for (std::size_t k = 0; k < n; ++k) w *= cellw[k][(i / phi.stride(k)) % phi.shape()[k]];
    out.rhs += w;
  }

  // Left side: per-axis nodes and weights (including x^a) on the pieces
  // between breakpoints {o + i c} and {2(o + i c)}, where T phi is rational.
  // On the first piece T phi is constant, so x^a is integrated exactly.
  using G8 = boost::math::quadrature::gauss<double, 8>;
  std::vector<std::vector<double>> nodes(n), weights(n);
  std::vector<std::vector<AxisWeights>> aw(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double c = phi.cell_sizes()[k], o = phi.origin()[k];
    const std::size_t N = phi.shape()[k];
    std::vector<double> br{0.0};
    for (std::size_t i = 0; i <= N; ++i) {
      const double b = o + static_cast<double>(i) * c;
      br.push_back(b);
      br.push_back(2.0 * b);
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    const double end = 2.0 * (o + static_cast<double>(N) * c);
    for (std::size_t i = 0; i + 1 < br.size() && br[i] < end; ++i) {
      const double lo = br[i], hi = br[i + 1];
      if (lo == 0.0) {
        nodes[k].push_back(0.5 * hi);
        weights[k].push_back(power_segment(a + 1.0, 0.0, hi));
        continue;
      }
      const auto& ab = G8::abscissa();
      const auto& wt = G8::weights();
      const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      for (std::size_t q = 0; q < ab.size(); ++q) {
        for (double sg : {-1.0, 1.0}) {
          const double x = mid + sg * half * ab[q];
          nodes[k].push_back(x);
          weights[k].push_back(half * wt[q] * std::pow(x, a));
        }
      }
    }
    for (double x : nodes[k]) aw[k].push_back(axis_weights(x, o, c, N));
  }

  // Contract one axis at a time: values over (nodes_0..nodes_{k-1}, N_k..).
  std::vector<std::size_t> dims(phi.shape().begin(), phi.shape().end());
  std::vector<double> cur(phi.values().begin(), phi.values().end());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t outer = 1, inner = 1;
    for (std::size_t d = 0; d < k; ++d) outer *= dims[d];
    for (std::size_t d = k + 1; d < n; ++d) inner *= dims[d];
    const std::size_t Nk = dims[k], Q = nodes[k].size();
    std::vector<double> next(outer * Q * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t q = 0; q < Q; ++q) {
        const AxisWeights& w = aw[k][q];
        double* dst = &next[(o * Q + q) * inner];
        for (std::size_t j = 0; j < w.w.size(); ++j) {
          const double* src = &cur[(o * Nk + w.first + j) * inner];
          const double ww = w.w[j];
          if (ww == 0.0) continue;
          for (std::size_t in = 0; in < inner; ++in) dst[in] += ww * src[in];
        }
      }
    cur.swap(next);
    dims[k] = Q;
  }
  // Weighted sum over the node tensor, last axis fastest.
  std::vector<std::size_t> j(n, 0);
  for (std::size_t flat = 0; flat < cur.size(); ++flat) {
    std::size_t rem = flat;
    double w = 1.0;
    for (std::size_t k = n; k > 0; --k) {
      j[k - 1] = rem % dims[k - 1];
      rem /= dims[k - 1];
      w *= weights[k - 1][j[k - 1]];
    }
    if (cur[flat] != 0.0) out.lhs += w * std::pow(cur[flat], r);
  }
  return out;
}

}  // namespace agf
