#include "agf/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "agf/error.hpp"
#include "agf/kernels.hpp"

namespace agf {

namespace {

double root(double x, double p) { return p == 1.0 ? x : std::pow(x, 1.0 / p); }

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("moduli require 1 <= p < inf");
}

// int_0^w (A + B x)^q dx for A >= 0, A + B w >= 0.
double linear_power_integral(double A, double B, double w, double q) {
  if (w <= 0.0) return 0.0;
  const double end = std::max(0.0, A + B * w);
  if (std::fabs(B * w) <= 1e-7 * A) return std::pow(A, q) * w * (1.0 + 0.5 * q * B * w / A);
  return (std::pow(end, q + 1.0) - std::pow(A, q + 1.0)) / (B * (q + 1.0));
}

std::size_t lattice_multiple(double h, double c, const char* what) {
  const double m = std::round(h / c);
  if (m < 1.0 || std::fabs(m * c - h) > 1e-9 * std::max(h, c))
    throw ParameterError(std::string(what) + ": h must be a positive integer multiple of the cell size");
  return static_cast<std::size_t>(m);
}

}  // namespace

// ---------------------------------------------------------------- ModulusCurve

ModulusCurve::ModulusCurve(double p, std::vector<double> deltas, std::vector<double> omegas, std::size_t axis)
    : p_(p), axis_(axis), deltas_(std::move(deltas)), omegas_(std::move(omegas)) {
  check_p(p);
  if (deltas_.empty() || deltas_.size() != omegas_.size())
    throw ValidationError("modulus curve needs matching, nonempty breakpoint and value lists");
  if (deltas_.front() != 0.0) throw ValidationError("modulus curve must start at delta = 0");
  for (std::size_t i = 1; i < deltas_.size(); ++i)
    if (!(deltas_[i] > deltas_[i - 1])) throw ValidationError("modulus breakpoints must increase strictly");
  powers_.reserve(omegas_.size());
  for (double w : omegas_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("modulus values must be finite and nonnegative");
    powers_.push_back(std::pow(w, p_));
  }
}

double ModulusCurve::operator()(double delta) const {
  if (deltas_.empty()) return 0.0;
  delta = std::fabs(delta);
  if (delta >= deltas_.back()) return omegas_.back();
  auto it = std::upper_bound(deltas_.begin(), deltas_.end(), delta);
  const std::size_t i = static_cast<std::size_t>(it - deltas_.begin());  // deltas_[i-1] <= delta < deltas_[i]
  const double a = deltas_[i - 1], b = deltas_[i];
  const double w = (delta - a) / (b - a);
  return root((1.0 - w) * powers_[i - 1] + w * powers_[i], p_);
}

double ModulusCurve::finest_scale() const {
  return deltas_.size() > 1 ? deltas_[1] : std::numeric_limits<double>::infinity();
}

bool ModulusCurve::is_zero() const {
  return std::all_of(omegas_.begin(), omegas_.end(), [](double w) { return w == 0.0; });
}

// ---------------------------------------------------------------- ShiftProfile

ShiftProfile::ShiftProfile(const GridFunction& f, std::size_t axis, double p)
    : axis_(axis), p_(p), cell_(0.0) {
  check_p(p);
  if (axis >= f.dims()) throw ParameterError("axis out of range");
  cell_ = f.cell_sizes()[axis];
  lattice_ = kernels::axis_shift_power_sums(f, axis, p);
  running_max_.resize(lattice_.size());
  double m = 0.0;
  for (std::size_t i = 0; i < lattice_.size(); ++i) running_max_[i] = m = std::max(m, lattice_[i]);
}

double ShiftProfile::power(double h) const {
  h = std::fabs(h);
  const std::size_t N = lattice_.size() - 1;
  const double q = h / cell_;
  if (q >= static_cast<double>(N)) return lattice_[N];
  const auto m = static_cast<std::size_t>(std::floor(q));
  const double w = q - static_cast<double>(m);
  return (1.0 - w) * lattice_[m] + w * lattice_[m + 1];
}

double ShiftProfile::norm(double h) const { return root(power(h), p_); }

double ShiftProfile::modulus(double delta) const {
  if (!(delta >= 0.0)) throw ParameterError("modulus scale must be nonnegative");
  const std::size_t N = lattice_.size() - 1;
  const double q = delta / cell_;
  const std::size_t m = q >= static_cast<double>(N) ? N : static_cast<std::size_t>(std::floor(q));
  return root(std::max(running_max_[m], power(delta)), p_);
}

double ShiftProfile::integral_of_norm(double delta) const {
  if (!(delta >= 0.0)) throw ParameterError("integration bound must be nonnegative");
  const std::size_t N = lattice_.size() - 1;
  const double q = 1.0 / p_;
  double s = 0.0;
  for (std::size_t m = 0; m < N; ++m) {
    const double a = static_cast<double>(m) * cell_;
    if (a >= delta) return s;
    const double w = std::min(cell_, delta - a);
    s += linear_power_integral(lattice_[m], (lattice_[m + 1] - lattice_[m]) / cell_, w, q);
  }
  const double end = static_cast<double>(N) * cell_;
  if (delta > end) s += root(lattice_[N], p_) * (delta - end);
  return s;
}

ModulusCurve ShiftProfile::curve() const {
  const std::size_t N = lattice_.size() - 1;
  std::vector<double> d{0.0}, wp{0.0};
  for (std::size_t m = 0; m < N; ++m) {
    const double a = static_cast<double>(m) * cell_;
    const double R = running_max_[m];
    const double L0 = lattice_[m], L1 = lattice_[m + 1];
    if (L1 > R && L0 < R) {
      // I^p crosses the running max inside the segment: kink.
      const double s = (R - L0) / (L1 - L0);
      if (s > 0.0 && s < 1.0) {
        d.push_back(a + s * cell_);
        wp.push_back(R);
      }
    }
    d.push_back(static_cast<double>(m + 1) * cell_);
    wp.push_back(running_max_[m + 1]);
  }
  std::vector<double> w;
  w.reserve(wp.size());
  for (double x : wp) w.push_back(root(x, p_));
  return ModulusCurve(p_, std::move(d), std::move(w), axis_);
}

double shift_difference_norm(const GridFunction& f, std::size_t axis, double h, double p) {
  return ShiftProfile(f, axis, p).norm(h);
}

double partial_modulus(const GridFunction& f, std::size_t axis, double delta, double p) {
  return ShiftProfile(f, axis, p).modulus(delta);
}

ModulusCurve modulus_curve(const GridFunction& f, std::size_t axis, double p) {
  return ShiftProfile(f, axis, p).curve();
}

// ---------------------------------------------------------------- Steklov means

SteklovMean::SteklovMean(const GridFunction& f, double h, std::size_t axis)
    : f_(f), axis_(axis), h_(h), window_(0), first_node_(0), node_count_(0) {
  if (axis >= f.dims()) throw ParameterError("axis out of range");
  if (!(h > 0.0)) throw ParameterError("Steklov window must be positive");
  if (f.domains()[axis] == AxisDomain::interval)
    throw ParameterError("Steklov means are defined on the line or half line only");
  window_ = lattice_multiple(h, f.cell_sizes()[axis], "steklov_mean");
  const long N = static_cast<long>(f.shape()[axis]);
  const long m = static_cast<long>(window_);
  first_node_ = f.domains()[axis] == AxisDomain::line ? -m : 0;
  node_count_ = static_cast<std::size_t>(N - first_node_ + 1);

  const std::size_t others = f.cell_count() / f.shape()[axis];
  nodes_.assign(others * node_count_, 0.0);
  std::vector<std::size_t> idx(f.dims());
  std::size_t row = 0;
  for (std::size_t flat = 0; flat < f.cell_count(); ++flat) {
    if ((flat / f.stride(axis)) % f.shape()[axis] != 0) continue;
    idx = f.unravel(flat);
    for (std::size_t j = 0; j < node_count_; ++j) {
      const long node = first_node_ + static_cast<long>(j);
      double s = 0.0;
      for (long l = 0; l < m; ++l) s += source_value(idx, node + l);
      nodes_[row * node_count_ + j] = s / static_cast<double>(m);
    }
    ++row;
  }
}

double SteklovMean::source_value(std::span<const std::size_t> other, long cell) const {
  if (cell < 0 || cell >= static_cast<long>(f_.shape()[axis_])) return 0.0;
  std::vector<std::size_t> idx(other.begin(), other.end());
  idx[axis_] = static_cast<std::size_t>(cell);
  return f_.at(idx);
}

double SteklovMean::node_value(std::span<const std::size_t> other, long node) const {
  const long j = node - first_node_;
  if (j < 0 || j >= static_cast<long>(node_count_)) return 0.0;
  // Row number of `other` among sections ordered by flat index.
  std::size_t row = 0, mult = 1;
  for (std::size_t k = f_.dims(); k > 0; --k) {
    if (k - 1 == axis_) continue;
    row += other[k - 1] * mult;
    mult *= f_.shape()[k - 1];
  }
  return nodes_[row * node_count_ + static_cast<std::size_t>(j)];
}

double SteklovMean::value_at(std::span<const double> x) const {
  const std::size_t n = f_.dims();
  std::vector<std::size_t> idx(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == axis_) continue;
    const double u = (x[k] - f_.origin()[k]) / f_.cell_sizes()[k];
    if (u < 0.0 || u >= static_cast<double>(f_.shape()[k])) return 0.0;
    idx[k] = static_cast<std::size_t>(std::floor(u));
  }
  const double u = (x[axis_] - f_.origin()[axis_]) / f_.cell_sizes()[axis_];
  const long cell = static_cast<long>(std::floor(u));
  const double w = u - static_cast<double>(cell);
  return (1.0 - w) * node_value(idx, cell) + w * node_value(idx, cell + 1);
}

namespace {

// int_0^1 |a + (b - a) s|^p ds
double linear_abs_power(double a, double b, double p) {
  const double A = std::fabs(a), B = std::fabs(b);
  if (A == 0.0 && B == 0.0) return 0.0;
  if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0))
    return (std::pow(A, p + 1.0) + std::pow(B, p + 1.0)) / ((p + 1.0) * (A + B));
  const double hi = std::max(A, B), lo = std::min(A, B);
  if (hi - lo <= 1e-4 * hi) {
    // Nearly constant: 8-point Gauss-Legendre is exact to rounding here.
    static constexpr double x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
    static constexpr double wt[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
      for (double sg : {-1.0, 1.0}) {
        const double t = 0.5 * (1.0 + sg * x[i]);
        s += wt[i] * std::pow(lo + (hi - lo) * t, p);
      }
    }
    return 0.5 * s;
  }
  return (std::pow(hi, p + 1.0) - std::pow(lo, p + 1.0)) / ((p + 1.0) * (hi - lo));
}

}  // namespace

double SteklovMean::lp_distance(double p) const {
  check_p(p);
  const long N = static_cast<long>(f_.shape()[axis_]);
  const double c = f_.cell_sizes()[axis_];
  double s = 0.0;
  for (std::size_t flat = 0; flat < f_.cell_count(); ++flat) {
    if ((flat / f_.stride(axis_)) % f_.shape()[axis_] != 0) continue;
    const auto idx = f_.unravel(flat);
    for (long i = first_node_; i < N; ++i) {
      const double v = source_value(idx, i);
      s += linear_abs_power(v - node_value(idx, i), v - node_value(idx, i + 1), p);
    }
  }
  return root(s * c * f_.face_volume(axis_), p);
}

GridFunction SteklovMean::cell_averages() const {
  std::vector<std::size_t> shape(f_.shape().begin(), f_.shape().end());
  const long N = static_cast<long>(shape[axis_]);
  const std::size_t cells = static_cast<std::size_t>(N - first_node_);
  shape[axis_] = cells;
  std::vector<double> origin(f_.origin().begin(), f_.origin().end());
  origin[axis_] += static_cast<double>(first_node_) * f_.cell_sizes()[axis_];
  std::size_t total = 1;
  for (auto e : shape) total *= e;
  std::vector<double> vals(total);
  GridFunction geom(shape, {f_.cell_sizes().begin(), f_.cell_sizes().end()}, origin, std::vector<double>(total, 0.0),
                    {f_.domains().begin(), f_.domains().end()});
  for (std::size_t flat = 0; flat < total; ++flat) {
    auto idx = geom.unravel(flat);
    const long cell = static_cast<long>(idx[axis_]) + first_node_;
    vals[flat] = 0.5 * (node_value(idx, cell) + node_value(idx, cell + 1));
  }
  return geom.with_values(std::move(vals));
}

SteklovMean steklov_mean(const GridFunction& f, double h, std::size_t axis) { return SteklovMean(f, h, axis); }

GridFunction steklov_axis_derivative(const GridFunction& f, double h, std::size_t axis) {
  if (axis >= f.dims()) throw ParameterError("axis out of range");
  if (!(h > 0.0)) throw ParameterError("Steklov window must be positive");
  if (f.domains()[axis] == AxisDomain::interval)
    throw ParameterError("Steklov means are defined on the line or half line only");
  const long m = static_cast<long>(lattice_multiple(h, f.cell_sizes()[axis], "steklov_axis_derivative"));
  const long N = static_cast<long>(f.shape()[axis]);
  const long first = f.domains()[axis] == AxisDomain::line ? -m : 0;
  std::vector<std::size_t> shape(f.shape().begin(), f.shape().end());
  shape[axis] = static_cast<std::size_t>(N - first);
  std::vector<double> origin(f.origin().begin(), f.origin().end());
  origin[axis] += static_cast<double>(first) * f.cell_sizes()[axis];
  std::size_t total = 1;
  for (auto e : shape) total *= e;
  GridFunction geom(shape, {f.cell_sizes().begin(), f.cell_sizes().end()}, origin, std::vector<double>(total, 0.0),
                    {f.domains().begin(), f.domains().end()});
  std::vector<double> vals(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    auto idx = geom.unravel(flat);
    const long i = static_cast<long>(idx[axis]) + first;
    auto src = [&](long cell) {
      if (cell < 0 || cell >= N) return 0.0;
      idx[axis] = static_cast<std::size_t>(cell);
      return f.at(idx);
    };
    vals[flat] = std::fabs(src(i + m) - src(i)) / h;
  }
  return geom.with_values(std::move(vals));
}

// ---------------------------------------------------------------- axioms

bool AxiomsReport::all_pass() const {
  return std::all_of(lines.begin(), lines.end(), [](const AxiomLine& l) { return l.pass; });
}

bool AxiomsReport::passes(const std::string& name) const {
  for (const auto& l : lines)
    if (l.name == name) return l.pass;
  return false;
}

std::string AxiomsReport::str() const {
  std::ostringstream os;
  os.precision(12);
  for (const auto& l : lines) os << l.name << ' ' << l.worst_ratio << ' ' << (l.pass ? "pass" : "fail") << '\n';
  return os.str();
}

AxiomsReport modulus_axioms_check(const ModulusCurve& curve, double delta_min, int levels, double tol) {
  if (!(delta_min > 0.0) || levels < 2) throw ParameterError("axiom check needs delta_min > 0 and at least two levels");
  std::vector<double> ds;
  for (int i = 0; i < levels; ++i) ds.push_back(std::ldexp(delta_min, i));
  std::vector<double> w;
  for (double d : ds) w.push_back(curve(d));

  auto quotient = [](double num, double den) {
    if (den > 0.0) return num / den;
    return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  AxiomsReport rep;
  auto add = [&](std::string name, double worst) {
    rep.lines.push_back({std::move(name), worst, worst <= 1.0 + tol});
  };

  {  // monotonicity on the sampled grid and on every breakpoint
    std::vector<double> all(ds);
    for (double d : curve.deltas()) all.push_back(d);
    std::sort(all.begin(), all.end());
    double worst = 0.0;
    for (std::size_t i = 1; i < all.size(); ++i) worst = std::max(worst, quotient(curve(all[i - 1]), curve(all[i])));
    add("monotone", worst);
  }
  add("zero", curve(0.0) > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  {
    double worst = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i)
      for (std::size_t j = i; j < ds.size(); ++j) worst = std::max(worst, quotient(curve(ds[i] + ds[j]), w[i] + w[j]));
    add("d1-subadditive", worst);
  }
  {
    double worst = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i)
      for (std::size_t j = i + 1; j < ds.size(); ++j)
        worst = std::max(worst, quotient(w[j], std::ldexp(w[i], static_cast<int>(j - i))));
    add("d2-doubling", worst);
  }
  {
    double worst = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i)
      for (std::size_t j = i + 1; j < ds.size(); ++j)
        worst = std::max(worst, quotient(w[j] / ds[j], 2.0 * w[i] / ds[i]));
    add("d3-quasi-monotone", worst);
  }
  {
    double sup = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) sup = std::max(sup, w[i] / ds[i]);
    for (double d : curve.deltas())
      if (d >= delta_min) sup = std::max(sup, curve(d) / d);
    add("d4-slope-limit", quotient(sup, w[0] / ds[0]));
  }
  return rep;
}

}  // namespace agf
