#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "agf/error.hpp"
#include "agf/kernels.hpp"
#include "agf/norms.hpp"

namespace agf {

namespace {

constexpr std::size_t kMaxCells = 10000;

struct Rule {
  std::vector<double> x, w;
};

// 8-point Gauss-Legendre on [-1, 1].
const Rule& gl8() {
  static const Rule r = [] {
    using G = boost::math::quadrature::gauss<double, 8>;
    Rule out;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
      out.x.push_back(-a[i]);
      out.w.push_back(w[i]);
      out.x.push_back(a[i]);
      out.w.push_back(w[i]);
    }
    return out;
  }();
  return r;
}

void append_gl8(Rule& out, double lo, double hi) {
  const Rule& g = gl8();
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    out.x.push_back(mid + half * g.x[i]);
    out.w.push_back(half * g.w[i]);
  }
}

// GL-8 on [lo, hi] split geometrically around z at scale H, for integrands
// that vary on the scale sqrt(H^2 + (y - z)^2).
Rule graded_rule(double lo, double hi, double z, double H) {
  std::vector<double> br{lo, hi};
  for (int i = 0; i < 60; ++i) {
    const double d = H * std::ldexp(1.0, i);
    if (z - d > lo && z - d < hi) br.push_back(z - d);
    if (z + d > lo && z + d < hi) br.push_back(z + d);
    if (z - d <= lo && z + d >= hi) break;
  }
  if (z > lo && z < hi) br.push_back(z);
  std::sort(br.begin(), br.end());
  Rule r;
  for (std::size_t i = 0; i + 1 < br.size(); ++i)
    if (br[i + 1] > br[i]) append_gl8(r, br[i], br[i + 1]);
  return r;
}

// Tensor loop over per-dimension rules; calls f(point, weight).
template <class F>
void tensor_each(const std::vector<Rule>& rules, F&& f) {
  const std::size_t d = rules.size();
  std::vector<std::size_t> i(d, 0);
  std::vector<double> pt(d);
  for (const auto& r : rules)
    if (r.x.empty()) return;
  while (true) {
    double w = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      pt[k] = rules[k].x[i[k]];
      w *= rules[k].w[i[k]];
    }
    f(pt, w);
    std::size_t k = d;
    while (k > 0) {
      --k;
      if (++i[k] < rules[k].x.size()) break;
      i[k] = 0;
      if (k == 0) return;
    }
    if (d == 0) return;
  }
}

// int over the complement of the box [lo, hi] of |y - x|^{-n-s} dy for x in
// the box, by pyramids from x over the faces:
//   (1/s) sum_F dist(x, F) int_F |y - x|^{-n-s} dsigma(y).
double exterior_integral(const std::vector<double>& x, const std::vector<double>& lo, const std::vector<double>& hi,
                         double s) {
  const std::size_t n = x.size();
  const double e = static_cast<double>(n) + s;
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (double plane : {lo[k], hi[k]}) {
      const double H = std::fabs(plane - x[k]);
      if (H == 0.0) return kInf;
      std::vector<Rule> rules;
      std::vector<std::size_t> dims;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == k) continue;
        rules.push_back(graded_rule(lo[j], hi[j], x[j], H));
        dims.push_back(j);
      }
      double face = 0.0;
      if (rules.empty()) {
        face = std::pow(H, -e);
      } else {
        tensor_each(rules, [&](const std::vector<double>& y, double w) {
          double r2 = H * H;
          for (std::size_t a = 0; a < y.size(); ++a) r2 += (y[a] - x[dims[a]]) * (y[a] - x[dims[a]]);
          face += w * std::pow(r2, -0.5 * e);
        });
      }
      total += H * face;
    }
  }
  return total / s;
}

void check_args(const GridFunction& f, double alpha, double p) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  if (!(p >= 1.0) || std::isinf(p)) throw ParameterError("p must satisfy 1 <= p < inf");
  if (!(alpha * p < 1.0))
    throw ParameterError("the Gagliardo integral of a step function is finite only for alpha p < 1");
  if (f.cell_count() > kMaxCells) throw ResourceError("Gagliardo seminorm limited to 1e4 cells");
}

// Multiply polynomial (coefficients in lambda) by (a + b lambda).
void poly_mul(std::vector<double>& c, double a, double b) {
  c.push_back(0.0);
  for (std::size_t d = c.size() - 1; d > 0; --d) c[d] = a * c[d] + b * c[d - 1];
  c[0] *= a;
}

}  // namespace

double gagliardo_seminorm(const GridFunction& f, double alpha, double p) {
  check_args(f, alpha, p);
  for (AxisDomain d : f.domains())
    if (d != AxisDomain::line) throw ParameterError("Gagliardo seminorm needs every axis on the line");
  if (f.support_cells() == 0) return 0.0;

  const std::size_t n = f.dims();
  const double s = alpha * p;
  const double e = static_cast<double>(n) + s;
  const auto c = f.cell_sizes();
  std::vector<long> N(n);
  std::vector<std::size_t> ext(n), tstride(n);
  for (std::size_t k = 0; k < n; ++k) {
    N[k] = static_cast<long>(f.shape()[k]);
    ext[k] = 2 * f.shape()[k] + 1;
  }
  std::size_t acc = 1;
  for (std::size_t k = n; k > 0; --k) {
    tstride[k - 1] = acc;
    acc *= ext[k - 1];
  }
  const std::vector<double> table = kernels::lattice_shift_power_table(f, p);
  const double L_inf = 2.0 * lp_power_sum(f, p);
  auto L = [&](const long* m) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (m[k] < -N[k] || m[k] > N[k]) return L_inf;
      idx += static_cast<std::size_t>(m[k] + N[k]) * tstride[k];
    }
    return table[idx];
  };
  const std::size_t corners = std::size_t{1} << n;

  // Lattice cells of the box: m_k in [-N_k, N_k - 1].
  std::vector<std::size_t> cext(n);
  std::size_t cells = 1;
  for (std::size_t k = 0; k < n; ++k) {
    cext[k] = 2 * f.shape()[k];
    cells *= cext[k];
  }

  auto cell_term = [&](std::size_t flat) {
    std::array<long, 8> m{};
    std::size_t rem = flat;
    for (std::size_t k = n; k > 0; --k) {
      m[k - 1] = static_cast<long>(rem % cext[k - 1]) - N[k - 1];
      rem /= cext[k - 1];
    }
    std::array<double, 256> cv{};
    for (std::size_t eps = 0; eps < corners; ++eps) {
      std::array<long, 8> mm = m;
      for (std::size_t k = 0; k < n; ++k) mm[k] += static_cast<long>((eps >> (n - 1 - k)) & 1u);
      cv[eps] = L(mm.data());
    }
    bool at_origin = true;
    for (std::size_t k = 0; k < n; ++k) at_origin = at_origin && (m[k] == 0 || m[k] == -1);

    if (at_origin) {
      // Pyramids from the origin over the n far faces. In u_k = |h_k| the
      // corner next to the origin has local coordinate 0.
      double total = 0.0;
      for (std::size_t face = 0; face < n; ++face) {
        std::vector<Rule> rules;
        std::vector<std::size_t> dims;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == face) continue;
          Rule r;
          append_gl8(r, 0.0, c[j]);
          rules.push_back(std::move(r));
          dims.push_back(j);
        }
        double fint = 0.0;
        auto eval = [&](const std::vector<double>& yo, double w) {
          std::array<double, 8> u{};
          u[face] = c[face];
          for (std::size_t a = 0; a < yo.size(); ++a) u[dims[a]] = yo[a];
          double r2 = 0.0;
          for (std::size_t k = 0; k < n; ++k) r2 += u[k] * u[k];
          std::vector<double> poly(n + 1, 0.0);
          for (std::size_t eps = 0; eps < corners; ++eps) {
            std::vector<double> term{cv[eps]};
            for (std::size_t k = 0; k < n; ++k) {
              // Local coordinate along k: 1 at the far side from the origin.
              const bool neg = m[k] == -1;
              const bool bit = (eps >> (n - 1 - k)) & 1u;
              const bool far = neg ? !bit : bit;
              const double rk = u[k] / c[k];
              if (far)
                poly_mul(term, 0.0, rk);
              else
                poly_mul(term, 1.0, -rk);
            }
            for (std::size_t d = 0; d < term.size(); ++d) poly[d] += term[d];
          }
          double sum = 0.0;
          for (std::size_t d = 1; d <= n; ++d) sum += poly[d] / (static_cast<double>(d) - s);
          fint += w * std::pow(r2, -0.5 * e) * sum;
        };
        if (rules.empty())
          eval({}, 1.0);
        else
          tensor_each(rules, eval);
        total += c[face] * fint;
      }
      return total;
    }

    // Regular cell: tensor GL-8, subdivided until each piece is no wider
    // than its distance to the origin.
    double total = 0.0;
    std::vector<std::pair<std::vector<double>, std::vector<double>>> stack;
    std::vector<double> lo(n), hi(n);
    for (std::size_t k = 0; k < n; ++k) {
      lo[k] = static_cast<double>(m[k]) * c[k];
      hi[k] = lo[k] + c[k];
    }
    stack.emplace_back(lo, hi);
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      stack.pop_back();
      double dmin2 = 0.0, diam2 = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double near = a[k] > 0.0 ? a[k] : (b[k] < 0.0 ? -b[k] : 0.0);
        dmin2 += near * near;
        diam2 += (b[k] - a[k]) * (b[k] - a[k]);
      }
      if (dmin2 < diam2 && diam2 > 1e-6 * c[0] * c[0]) {
        for (std::size_t half = 0; half < corners; ++half) {
          std::vector<double> a2(n), b2(n);
          for (std::size_t k = 0; k < n; ++k) {
            const double mid = 0.5 * (a[k] + b[k]);
            const bool up = (half >> k) & 1u;
            a2[k] = up ? mid : a[k];
            b2[k] = up ? b[k] : mid;
          }
          stack.emplace_back(std::move(a2), std::move(b2));
        }
        continue;
      }
      std::vector<Rule> rules(n);
      for (std::size_t k = 0; k < n; ++k) append_gl8(rules[k], a[k], b[k]);
      tensor_each(rules, [&](const std::vector<double>& h, double w) {
        double r2 = 0.0, val = 0.0;
        for (std::size_t k = 0; k < n; ++k) r2 += h[k] * h[k];
        for (std::size_t eps = 0; eps < corners; ++eps) {
          double wt = cv[eps];
          for (std::size_t k = 0; k < n; ++k) {
            const double t = (h[k] - lo[k]) / c[k];
            wt *= ((eps >> (n - 1 - k)) & 1u) ? t : 1.0 - t;
          }
          val += wt;
        }
        total += w * std::pow(r2, -0.5 * e) * val;
      });
    }
    return total;
  };

  if (n > 8) throw ParameterError("Gagliardo seminorm supports at most 8 dimensions");
  const double interior = kernels::ordered_sum(cells, cell_term);
  std::vector<double> zero(n, 0.0), blo(n), bhi(n);
  for (std::size_t k = 0; k < n; ++k) {
    bhi[k] = static_cast<double>(N[k]) * c[k];
    blo[k] = -bhi[k];
  }
  return interior + L_inf * exterior_integral(zero, blo, bhi, s);
}

double gagliardo_midpoint_reference(const GridFunction& f, double alpha, double p) {
  check_args(f, alpha, p);
  const std::size_t n = f.dims();
  const double s = alpha * p;
  const double e = static_cast<double>(n) + s;
  const double v = f.cell_volume();
  constexpr int R = 4;
  std::vector<double> lo(n), hi(n);
  for (std::size_t k = 0; k < n; ++k) {
    lo[k] = f.origin()[k];
    hi[k] = lo[k] + static_cast<double>(f.shape()[k]) * f.cell_sizes()[k];
  }
  auto centre = [&](const std::vector<std::size_t>& idx) {
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = lo[k] + (static_cast<double>(idx[k]) + 0.5) * f.cell_sizes()[k];
    return x;
  };
  std::size_t sub = 1;
  for (std::size_t k = 0; k < n; ++k) sub *= R;
  auto sub_offset = [&](std::size_t q) {
    std::vector<double> o(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t ik = q % R;
      q /= R;
      o[k] = ((static_cast<double>(ik) + 0.5) / R - 0.5) * f.cell_sizes()[k];
    }
    return o;
  };

  double total = 0.0;
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    const auto ii = f.unravel(i);
    const auto xi = centre(ii);
    const double fi = f[i];
    if (fi > 0.0) total += 2.0 * std::pow(fi, p) * v * exterior_integral(xi, lo, hi, s);
    for (std::size_t j = 0; j < f.cell_count(); ++j) {
      if (i == j) continue;
      const double d = std::pow(std::fabs(fi - f[j]), p);
      if (d == 0.0) continue;
      const auto jj = f.unravel(j);
      const auto xj = centre(jj);
      bool near = true;
      for (std::size_t k = 0; k < n; ++k)
        near = near && (ii[k] > jj[k] ? ii[k] - jj[k] : jj[k] - ii[k]) <= 2;
      if (!near) {
        double r2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) r2 += (xi[k] - xj[k]) * (xi[k] - xj[k]);
        total += d * v * v * std::pow(r2, -0.5 * e);
        continue;
      }
      double acc = 0.0;
      for (std::size_t a = 0; a < sub; ++a) {
        const auto oa = sub_offset(a);
        for (std::size_t b = 0; b < sub; ++b) {
          const auto ob = sub_offset(b);
          double r2 = 0.0;
          for (std::size_t k = 0; k < n; ++k) {
            const double dx = xi[k] + oa[k] - xj[k] - ob[k];
            r2 += dx * dx;
          }
          acc += std::pow(r2, -0.5 * e);
        }
      }
      total += d * v * v * acc / static_cast<double>(sub * sub);
    }
  }
  return total;
}

}  // namespace agf
