#include "agf/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "agf/error.hpp"
#include "agf/kernels.hpp"

namespace agf {

double lorentz_norm(const StepFunction& g, double p, double r) {
  if (!(p > 0.0) || std::isinf(p)) throw ParameterError("Lorentz norm needs 0 < p < inf");
  if (!(r > 0.0)) throw ParameterError("Lorentz norm needs r > 0");
  if (std::isinf(r)) return g.weighted_sup(1.0 / p, 0.0, kInf);
  return std::pow(g.power_integral(r / p, r, 0.0, kInf), 1.0 / r);
}

double mixed_lorentz_norm(const GridFunction& g, double p, double r) {
  if (!(p > 0.0) || std::isinf(p)) throw ParameterError("Lorentz norm needs 0 < p < inf");
  if (!(r > 0.0)) throw ParameterError("Lorentz norm needs r > 0");
  if (!is_mdec(g)) throw PreconditionError("mixed Lorentz norm needs a function nonincreasing in every variable");
  const std::size_t n = g.dims();
  for (double o : g.origin())
    if (o < 0.0) throw PreconditionError("mixed Lorentz norm lives on R_+^n; origin must be nonnegative");

  // Per-axis factor tables: int over cell i of x^{r/p - 1} dx, or for r = inf
  // the sup weight at the upper corner.
  const bool sup = std::isinf(r);
  std::vector<std::vector<double>> factor(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double c = g.cell_sizes()[k], o = g.origin()[k];
    factor[k].resize(g.shape()[k]);
    for (std::size_t i = 0; i < g.shape()[k]; ++i) {
      const double lo = o + static_cast<double>(i) * c, hi = lo + c;
      factor[k][i] = sup ? std::pow(hi, 1.0 / p) : power_segment(r / p, lo, hi);
    }
  }
  auto weight = [&](std::size_t flat) {
    double w = 1.0;
    for (std::size_t k = 0; k < n; ++k) w *= factor[k][(flat / g.stride(k)) % g.shape()[k]];
    return w;
  };
  if (sup) {
    double best = 0.0;
    for (std::size_t i = 0; i < g.cell_count(); ++i)
      if (g[i] > 0.0) best = std::max(best, g[i] * weight(i));
    return best;
  }
  const double s = kernels::ordered_sum(g.cell_count(), [&](std::size_t i) {
    return g[i] > 0.0 ? std::pow(g[i], r) * weight(i) : 0.0;
  });
  return std::pow(s, 1.0 / r);
}

double mixed_lorentz_norm(const GridFunction& f, double p, double r, const Permutation& sigma) {
  return mixed_lorentz_norm(iterated_rearrangement(f, sigma), p, r);
}

const char* to_string(HeadRule h) {
  switch (h) {
    case HeadRule::linear_continuation: return "linear";
    case HeadRule::exact: return "exact";
    case HeadRule::drop: return "drop";
  }
  return "?";
}

std::string Truncation::str() const {
  std::ostringstream os;
  os.precision(6);
  os << '[' << lower << ',' << upper << "] head=" << to_string(head) << " parts=" << head_part << '/' << body_part
     << '/' << tail_part;
  return os.str();
}

namespace {

struct Piece {
  double a, b;  // breakpoints
  double A, B;  // omega^p = A + B t on [a, b]
};

std::vector<Piece> body_pieces(const ModulusCurve& w) {
  const auto d = w.deltas();
  const auto P = w.omega_powers();
  std::vector<Piece> out;
  for (std::size_t i = 1; i + 1 < d.size(); ++i) {
    const double B = (P[i + 1] - P[i]) / (d[i + 1] - d[i]);
    out.push_back({d[i], d[i + 1], P[i] - B * d[i], B});
  }
  return out;
}

struct SupResult {
  double value = 0.0;
  double scale = 0.0;
};

// sup_{t >= c} t^{-alpha} omega(t) over the curve (constant tail included).
SupResult weighted_curve_sup(const ModulusCurve& w, double alpha) {
  const auto d = w.deltas();
  const double p = w.p();
  SupResult best;
  auto consider = [&](double t) {
    const double v = w(t) * std::pow(t, -alpha);
    if (v > best.value) best = {v, t};
  };
  for (std::size_t i = 1; i < d.size(); ++i) consider(d[i]);
  for (const Piece& pc : body_pieces(w)) {
    if (pc.B == 0.0 || std::fabs(1.0 / p - alpha) < 1e-15) continue;
    const double t = alpha * pc.A / (pc.B * (1.0 / p - alpha));
    if (t > pc.a && t < pc.b) consider(t);
  }
  return best;
}

void check_alpha(double alpha, bool allow_one) {
  if (!(alpha > 0.0) || alpha > 1.0 || (!allow_one && alpha == 1.0))
    throw ParameterError(allow_one ? "alpha must lie in (0, 1]" : "alpha must lie in (0, 1)");
}

}  // namespace

SeminormValue besov_seminorm(const ModulusCurve& w, double alpha, double theta, HeadRule head) {
  check_alpha(alpha, false);
  if (!(theta > 0.0)) throw ParameterError("theta must be positive");
  SeminormValue out;
  const auto d = w.deltas();
  if (d.size() < 2 || w.is_zero()) return out;
  const double c = d[1];
  const double p = w.p();
  out.truncation.lower = c;
  out.truncation.upper = d.back();
  out.truncation.head = head;

  const SupResult s = weighted_curve_sup(w, alpha);
  const double S = s.value;
  const double wc = w(c) * std::pow(c, -alpha) / S;  // <= 1
  const bool head_diverges = head == HeadRule::exact && alpha >= 1.0 / p && wc > 0.0;

  if (std::isinf(theta)) {
    out.argmax_scale = s.scale;
    out.value = head_diverges ? kInf : S;
    return out;
  }

  auto& tr = out.truncation;
  switch (head) {
    case HeadRule::linear_continuation: tr.head_part = std::pow(wc, theta) / (theta * (1.0 - alpha)); break;
    case HeadRule::exact: tr.head_part = head_diverges ? kInf : std::pow(wc, theta) / (theta * (1.0 / p - alpha)); break;
    case HeadRule::drop: tr.head_part = 0.0; break;
  }

  // Fixed 30-point Gauss-Legendre on subintervals with b/a <= 1.25: the
  // integrand is analytic there with its only singularity at t = 0.
  using G30 = boost::math::quadrature::gauss<double, 30>;
  const double ip = 1.0 / p;
  std::vector<double> parts;
  for (const Piece& pc : body_pieces(w)) {
    auto F = [&](double t) {
      const double P = std::max(0.0, pc.A + pc.B * t);
      return std::pow(std::pow(P, ip) * std::pow(t, -alpha) / S, theta) / t;
    };
    double acc = 0.0;
    for (double lo = pc.a; lo < pc.b;) {
      const double hi = std::min(pc.b, 1.25 * lo);
      acc += G30::integrate(F, lo, hi);
      lo = hi;
    }
    parts.push_back(acc);
  }
  double body = 0.0;
  for (double x : parts) body += x;
  tr.body_part = body;
  tr.tail_part = std::pow(w.saturation() * std::pow(d.back(), -alpha) / S, theta) / (alpha * theta);
  out.value = S * std::pow(tr.head_part + tr.body_part + tr.tail_part, 1.0 / theta);
  return out;
}

SeminormValue besov_seminorm(const GridFunction& f, std::size_t axis, double alpha, double theta, double p,
                             HeadRule head) {
  return besov_seminorm(modulus_curve(f, axis, p), alpha, theta, head);
}

SeminormValue lipschitz_seminorm(const ModulusCurve& w, double alpha) {
  check_alpha(alpha, true);
  SeminormValue out;
  const auto d = w.deltas();
  if (d.size() < 2 || w.is_zero()) return out;
  const double c = d[1];
  const SupResult s = weighted_curve_sup(w, alpha);
  out.value = s.value;
  out.argmax_scale = s.scale;
  out.truncation.lower = c;
  out.truncation.upper = d.back();
  out.truncation.head = HeadRule::drop;
  if (s.scale == c) {
    const double w1 = w(c), w2 = w(2.0 * c);
    out.unbounded_at_scale = w1 > 0.0 && std::log2(w2 / w1) < alpha - 0.05;
  }
  return out;
}

SeminormValue lipschitz_seminorm(const GridFunction& f, std::size_t axis, double alpha, double p) {
  return lipschitz_seminorm(modulus_curve(f, axis, p), alpha);
}

BesovParams derive_params(double p, const std::vector<double>& beta_j, const std::vector<double>& theta_j) {
  if (!(p >= 1.0) || std::isinf(p)) throw ParameterError("p must satisfy 1 <= p < inf");
  if (beta_j.empty() || beta_j.size() != theta_j.size())
    throw ParameterError("need one beta_j and one theta_j per axis");
  BesovParams bp;
  bp.p = p;
  bp.n = beta_j.size();
  bp.beta_j = beta_j;
  bp.theta_j = theta_j;
  const double n = static_cast<double>(bp.n);
  double inv_beta = 0.0, inv_bt = 0.0;
  for (std::size_t j = 0; j < bp.n; ++j) {
    if (!(beta_j[j] > 0.0 && beta_j[j] < 1.0)) throw ParameterError("beta_j must lie in (0, 1)");
    if (!(theta_j[j] > 0.0)) throw ParameterError("theta_j must be positive");
    if (theta_j[j] < p) bp.open_case = true;
    inv_beta += 1.0 / beta_j[j];
    inv_bt += std::isinf(theta_j[j]) ? 0.0 : 1.0 / (beta_j[j] * theta_j[j]);
  }
  bp.beta = n / inv_beta;
  bp.theta = inv_bt == 0.0 ? kInf : (n / bp.beta) / inv_bt;
  bp.admissible = p < n / bp.beta;
  bp.q = bp.admissible ? n * p / (n - bp.beta * p) : kInf;
  return bp;
}

LipschitzParams derive_lipschitz_params(double p, const std::vector<double>& alpha_k) {
  if (!(p >= 1.0) || std::isinf(p)) throw ParameterError("p must satisfy 1 <= p < inf");
  if (alpha_k.empty()) throw ParameterError("need one alpha_k per axis");
  LipschitzParams lp;
  lp.p = p;
  lp.n = alpha_k.size();
  lp.alpha_k = alpha_k;
  const double n = static_cast<double>(lp.n);
  double inv = 0.0;
  for (double a : alpha_k) {
    if (!(a > 0.0 && a <= 1.0)) throw ParameterError("alpha_k must lie in (0, 1]");
    inv += 1.0 / a;
    if (a == 1.0) ++lp.nu;
  }
  lp.alpha = n / inv;
  lp.admissible = lp.alpha * p < n;
  lp.q_star = lp.admissible ? n * p / (n - lp.alpha * p) : kInf;
  lp.s = lp.nu == 0 ? kInf : n * p / (static_cast<double>(lp.nu) * lp.alpha);
  return lp;
}

}  // namespace agf
