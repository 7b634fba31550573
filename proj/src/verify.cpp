#include "agf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "agf/error.hpp"
#include "agf/moduli.hpp"

namespace agf {

bool is_hard_constant(const std::string& id) {
  static const char* ids[] = {"o-w2", "moduli", "int",  "steklov1",      "steklov2", "oper",
                              "monotone", "iter", "lw", "gauge-product", "minkowski"};
  return std::find(std::begin(ids), std::end(ids), id) != std::end(ids);
}

bool is_threshold_check(const std::string& id) {
  return id == "k-l-gap" || id == "bbm-gap" || id == "limit-sweep-stability" || id == "limit-sweep-control";
}

double VerifyContext::budget(const std::string& id) const {
  if (is_hard_constant(id)) return kHardBudget;
  if (is_threshold_check(id)) return 1.0;
  if (budgets == nullptr) return kInf;
  if (auto b = budgets->find(id)) return *b;
  throw FormatError("budget file has no entry for '" + id + "'");
}

namespace {

Json json_number(double x) {
  if (std::isinf(x)) return "inf";
  return x;
}

Json json_numbers(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(json_number(x));
  return a;
}

bool is_lattice_multiple(double h, double c) {
  const double m = std::round(h / c);
  return m >= 1.0 && std::fabs(m * c - h) <= 1e-9 * h;
}

std::string window(const Truncation& t) {
  std::ostringstream os;
  os.precision(6);
  os << "delta in [" << t.lower << ',' << t.upper << "] head=" << to_string(t.head) << " closed tail";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- moduli lemmas

std::vector<InequalityReport> verify_modulus_lemmas(const GridFunction& f, const std::string& id, double p,
                                                    const std::vector<double>& deltas) {
  std::vector<InequalityReport> out;
  for (std::size_t k = 0; k < f.dims(); ++k) {
    const ShiftProfile sp(f, k, p);
    const double c = f.cell_sizes()[k];
    for (double d : deltas) {
      if (!(d > 0.0)) throw ParameterError("delta must be positive");
      const Json params = {{"p", p}, {"axis", k}, {"delta", d}};
      const double w = sp.modulus(d);
      out.push_back(make_report("int", id, params, w, 3.0 / d * sp.integral_of_norm(d), kHardBudget));
      if (!is_lattice_multiple(d, c) || f.domains()[k] == AxisDomain::interval) continue;
      const SteklovMean sm(f, d, k);
      out.push_back(make_report("steklov1", id, params, sm.lp_distance(p), w, kHardBudget));
      out.push_back(make_report("steklov2", id, params, lp_norm(steklov_axis_derivative(f, d, k), p), w / d,
                                kHardBudget));
    }
  }
  return out;
}

std::vector<InequalityReport> verify_rearrangement_modulus(const GridFunction& f, const std::string& id,
                                                           double p, const std::vector<double>& deltas,
                                                           const std::vector<Permutation>& sigmas) {
  std::vector<InequalityReport> out;
  const std::size_t n = f.dims();
  if (n == 1) {
    const double N = static_cast<double>(f.shape()[0]);
    const GridFunction g(std::vector<std::size_t>{f.shape()[0]}, {1.0 / N}, {0.0},
                         {f.values().begin(), f.values().end()}, {AxisDomain::interval});
    const ShiftProfile sf(g, 0, p), ss(axis_rearrangement(g, 0), 0, p);
    for (double d : deltas) {
      if (d > 0.5) continue;
      out.push_back(make_report("o-w2", id, {{"p", p}, {"delta", d}, {"domain", "[0,1]"}}, ss.modulus(d),
                                2.0 * sf.modulus(d), kHardBudget));
    }
  }
  const double three_n = std::pow(3.0, static_cast<double>(n));
  std::vector<ShiftProfile> base;
  for (std::size_t k = 0; k < n; ++k) base.emplace_back(f, k, p);
  for (const Permutation& s : sigmas) {
    const GridFunction r = iterated_rearrangement(f, s);
    for (std::size_t k = 0; k < n; ++k) {
      const ShiftProfile sr(r, k, p);
      for (double d : deltas)
        out.push_back(make_report("moduli", id, {{"p", p}, {"axis", k}, {"delta", d}, {"sigma", s.str()}},
                                  sr.modulus(d), three_n * base[k].modulus(d), kHardBudget));
    }
  }
  return out;
}

// ---------------------------------------------------------------- isotropic

double isotropic_estimate_lhs(const StepFunction& fs, double p, std::size_t n, double delta) {
  const double lower = std::pow(delta, static_cast<double>(n));
  const double e = -p / static_cast<double>(n);
  const auto t = fs.breakpoints();
  const auto v = fs.values();
  double lhs = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    // int_0^t (f*(u) - f*(t))^p du is constant for t in (t_{i-1}, t_i].
    if (t[i] > lower) {
      double C = 0.0, left = 0.0;
      for (std::size_t l = 0; l < i; ++l) {
        if (v[l] > v[i]) C += std::pow(v[l] - v[i], p) * (t[l] - left);
        left = t[l];
      }
      if (C > 0.0) lhs += C * power_segment(e, std::max(lower, prev), t[i]);
    }
    prev = t[i];
  }
  const double total = fs.power_integral(1.0, p, 0.0, kInf);
  if (total > 0.0) lhs += total * power_segment(e, std::max(lower, fs.support_end()), kInf);
  return lhs;
}

InequalityReport verify_isotropic_estimate(const GridFunction& f, const std::string& id, double p, double delta,
                                           const VerifyContext& ctx) {
  if (!(p >= 1.0) || std::isinf(p)) throw ParameterError("p must satisfy 1 <= p < inf");
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  double w = 0.0;
  for (std::size_t k = 0; k < f.dims(); ++k) w = std::max(w, partial_modulus(f, k, delta, p));
  const double lhs = isotropic_estimate_lhs(decreasing_rearrangement(f), p, f.dims(), delta);
  return make_report("estim6", id, {{"p", p}, {"delta", delta}, {"omega", "max_k omega_k"}}, lhs,
                     std::pow(w / delta, p), ctx.budget("estim6"));
}

// ---------------------------------------------------------------- anisotropic

std::vector<InequalityReport> verify_anisotropic_estimate(const GridFunction& f, const std::string& id, double p,
                                                          const AnisotropicGauge& gauge,
                                                          const std::vector<double>& hs, const VerifyContext& ctx) {
  if (gauge.dims != f.dims() || gauge.cell_volume != f.cell_volume() ||
      gauge.support_measure != f.support_measure())
    throw PreconditionError("gauge was not built from this function");
  std::vector<InequalityReport> out;
  const std::string sig = gauge.sigma.str();

  {  // exact gauge checks
    double worst = -1.0, wl = 0.0, wt = 0.0;
    bool lw_ok = true;
    double lw_worst = 0.0;
    for (const auto& pt : gauge.points) {
      if (pt.degenerate) continue;
      double prod = 1.0;
      for (double u : pt.u) prod *= u;
      if (prod / pt.t > worst) {
        worst = prod / pt.t;
        wl = prod;
        wt = pt.t;
      }
      lw_ok = lw_ok && pt.lw_holds;
      lw_worst = std::max(lw_worst, pt.lw_worst);
    }
    const Json gp = {{"sigma", sig}, {"t_grid", to_string(gauge.grid)}, {"points", gauge.points.size()}};
    out.push_back(make_report("gauge-product", id, gp, wl, wt, kHardBudget));
    InequalityReport lw = make_report("lw", id, gp, lw_worst, worst < 0.0 ? 0.0 : 1.0, kHardBudget);
    if (worst >= 0.0) lw.verdict = lw_ok ? Verdict::pass : Verdict::fail;
    out.push_back(std::move(lw));
  }

  const StepFunction phi = dyadic_decrement(decreasing_rearrangement(f));
  double t_last = 0.0;
  for (const auto& pt : gauge.points)
    if (!pt.degenerate) t_last = pt.t;
  std::ostringstream tr;
  tr.precision(6);
  tr << "t in (0," << t_last << "] u_j constant on lattice intervals";

  for (std::size_t j = 0; j < f.dims(); ++j) {
    const ShiftProfile sp(f, j, p);
    for (double h : hs) {
      if (!(h > 0.0)) throw ParameterError("h must be positive");
      const double w = sp.modulus(h);
      double integral = 0.0, sup = 0.0, lo = 0.0;
      bool empty = true;
      for (const auto& pt : gauge.points) {
        const double hi = pt.t;
        if (!pt.degenerate && pt.u[j] >= h) {
          empty = false;
          integral += std::pow(pt.u[j], -p) * phi.power_integral(1.0, p, lo, hi);
          sup = std::max(sup, phi.weighted_sup(1.0 / p, lo, hi) / pt.u[j]);
        }
        lo = hi;
      }
      const Json params = {{"p", p}, {"axis", j}, {"h", h}, {"sigma", sig}, {"t_grid", to_string(gauge.grid)}};
      InequalityReport a = make_report("huvud11", id, params, integral, std::pow(w / h, p), ctx.budget("huvud11"),
                                       tr.str());
      InequalityReport b = make_report("huvud111", id, params, sup, w / h, ctx.budget("huvud111"), tr.str());
      if (empty) a.verdict = b.verdict = Verdict::degenerate;
      out.push_back(std::move(a));
      out.push_back(std::move(b));
    }
  }
  return out;
}

// ---------------------------------------------------------------- embeddings

namespace {

EmbeddingSides sides_from_curves(const GridFunction& f, const std::vector<ModulusCurve>& curves,
                                 const BesovParams& bp, NormFlavor flavor, const Permutation& sigma,
                                 std::string* truncation = nullptr) {
  EmbeddingSides s;
  s.lhs = flavor == NormFlavor::lorentz ? lorentz_norm(decreasing_rearrangement(f), bp.q, bp.theta)
                                        : mixed_lorentz_norm(f, bp.q, bp.theta, sigma);
  s.rhs = s.rhs_without = 1.0;
  const double n = static_cast<double>(bp.n);
  for (std::size_t j = 0; j < bp.n; ++j) {
    const SeminormValue b = besov_seminorm(curves[j], bp.beta_j[j], bp.theta_j[j]);
    s.seminorms.push_back(b.value);
    const double expo = bp.beta / (n * bp.beta_j[j]);
    const double factor = std::isinf(bp.theta_j[j]) ? 1.0 : std::pow(1.0 - bp.beta_j[j], 1.0 / bp.theta_j[j]);
    s.rhs *= std::pow(factor * b.value, expo);
    s.rhs_without *= std::pow(b.value, expo);
    if (truncation && j == 0) *truncation = window(b.truncation);
  }
  return s;
}

std::vector<ModulusCurve> curves_of(const GridFunction& f, double p) {
  std::vector<ModulusCurve> c;
  for (std::size_t k = 0; k < f.dims(); ++k) c.push_back(modulus_curve(f, k, p));
  return c;
}

Json besov_json(const BesovParams& bp) {
  return {{"p", bp.p},
          {"beta_j", json_numbers(bp.beta_j)},
          {"theta_j", json_numbers(bp.theta_j)},
          {"beta", bp.beta},
          {"theta", json_number(bp.theta)},
          {"q", json_number(bp.q)}};
}

void check_usable(const BesovParams& bp, std::size_t n, const VerifyContext& ctx) {
  if (bp.n != n) throw ParameterError("parameter dimension does not match the function");
  if (!bp.admissible) throw ParameterError("inadmissible exponents: need p < n / beta");
  if (bp.open_case && !ctx.explore_open_case)
    throw ParameterError("theta_j < p is outside the proven range; pass --explore-open-case to log it");
}

}  // namespace

EmbeddingSides embedding_sides(const GridFunction& f, const BesovParams& params, NormFlavor flavor,
                               const Permutation& sigma) {
  return sides_from_curves(f, curves_of(f, params.p), params, flavor, sigma);
}

std::vector<InequalityReport> verify_embedding(const GridFunction& f, const std::string& id,
                                               const BesovParams& bp, NormFlavor flavor,
                                               const Permutation& sigma, const VerifyContext& ctx) {
  check_usable(bp, f.dims(), ctx);
  std::vector<InequalityReport> out;
  std::string tr;
  const EmbeddingSides s = sides_from_curves(f, curves_of(f, bp.p), bp, flavor, sigma, &tr);
  Json params = besov_json(bp);
  const std::string ineq = flavor == NormFlavor::lorentz ? "main12" : "main1000";
  if (flavor == NormFlavor::mixed) params["sigma"] = sigma.str();
  if (bp.open_case)
    out.push_back(make_logged(ineq, id, params, s.lhs, s.rhs, tr));
  else
    out.push_back(make_report(ineq, id, params, s.lhs, s.rhs, ctx.budget(ineq), tr));

  if (flavor == NormFlavor::lorentz) {
    const StepFunction fs = decreasing_rearrangement(f);
    const double J = lorentz_norm(dyadic_decrement(fs), bp.q, bp.theta);
    out.push_back(make_report("minkowski", id, {{"q", json_number(bp.q)}, {"theta", json_number(bp.theta)}}, s.lhs,
                              J / (1.0 - std::pow(2.0, -1.0 / bp.q)), kHardBudget));
  }
  return out;
}

SweepResult limiting_sweep(const GridFunction& f, const std::string& id, const BesovParams& base,
                           const std::vector<std::size_t>& sweep_axes, int m_max, const VerifyContext& ctx) {
  check_usable(base, f.dims(), ctx);
  if (m_max < 1) throw ParameterError("m_max must be positive");
  for (std::size_t a : sweep_axes)
    if (a >= f.dims()) throw ParameterError("sweep axis out of range");
  SweepResult res;
  res.trace.id = "limit-sweep";
  res.trace.function_id = id;
  res.trace.params = {{"p", base.p}, {"theta_j", json_numbers(base.theta_j)}, {"sweep_axes", sweep_axes}};
  const auto curves = curves_of(f, base.p);
  const Permutation id_sigma = Permutation::identity(f.dims());

  double r1 = 0.0, c1 = 0.0, worst = 1.0, c_last = 0.0;
  int done = 0;
  for (int m = 1; m <= m_max; ++m) {
    std::vector<double> beta = base.beta_j;
    const double b = 1.0 - std::ldexp(1.0, -m);
    for (std::size_t a : sweep_axes) beta[a] = b;
    const BesovParams bp = derive_params(base.p, beta, base.theta_j);
    if (!bp.admissible) {
      res.truncated = true;
      break;
    }
    std::string tr;
    const EmbeddingSides s = sides_from_curves(f, curves, bp, NormFlavor::lorentz, id_sigma, &tr);
    Json params = besov_json(bp);
    params["m"] = m;
    res.reports.push_back(make_report("limit-sweep", id, params, s.lhs, s.rhs, ctx.budget("limit-sweep"), tr));
    const double r = s.rhs > 0.0 ? s.lhs / s.rhs : 0.0;
    const double c = s.lhs > 0.0 ? s.rhs_without / s.lhs : 0.0;
    if (m == 1) {
      r1 = r;
      c1 = c;
    }
    res.trace.add("with-factors", m, b, r, r1);
    res.trace.add("without-factors", m, b, c, c1);
    if (r1 > 0.0 && r > 0.0) worst = std::max({worst, r / r1, r1 / r});
    c_last = c;
    done = m;
  }
  const Json sp = {{"m_max", done}, {"truncated", res.truncated}};
  if (r1 > 0.0) {
    res.reports.push_back(make_report("limit-sweep-stability", id, sp, worst, 2.0, 1.0));
    res.reports.push_back(make_report("limit-sweep-control", id, sp, 5.0, c1 > 0.0 ? c_last / c1 : 0.0, 1.0));
  }

  // Lipschitz corollary at the endpoint alpha_k = 1 on the swept axes.
  std::vector<double> alpha = base.beta_j;
  for (std::size_t a : sweep_axes) alpha[a] = 1.0;
  const LipschitzParams lp = derive_lipschitz_params(base.p, alpha);
  if (lp.nu > 0 && lp.admissible) {
    double rhs = 1.0;
    const double n = static_cast<double>(lp.n);
    for (std::size_t k = 0; k < lp.n; ++k)
      rhs *= std::pow(lipschitz_seminorm(curves[k], alpha[k]).value, lp.alpha / (n * alpha[k]));
    const double lhs = lorentz_norm(decreasing_rearrangement(f), lp.q_star, lp.s);
    res.reports.push_back(make_report("lipschitz-corollary", id,
                                      {{"p", lp.p},
                                       {"alpha_k", json_numbers(alpha)},
                                       {"alpha", lp.alpha},
                                       {"nu", lp.nu},
                                       {"q_star", lp.q_star},
                                       {"s", json_number(lp.s)}},
                                      lhs, rhs, ctx.budget("lipschitz-corollary")));
  }
  return res;
}

LimitResult verify_limit_relations(const GridFunction& f, const std::string& id, std::size_t axis, double p,
                                   double theta, int m_max) {
  if (axis >= f.dims()) throw ParameterError("axis out of range");
  if (!(theta > 0.0) || std::isinf(theta)) throw ParameterError("theta must be finite and positive");
  if (m_max < 1) throw ParameterError("m_max must be positive");
  const ModulusCurve curve = modulus_curve(f, axis, p);
  const SeminormValue lip = lipschitz_seminorm(curve, 1.0);
  const double target = std::pow(1.0 / theta, 1.0 / theta) * lip.value;
  LimitResult res;
  res.trace.id = "k-l";
  res.trace.function_id = id;
  res.trace.params = {{"p", p}, {"axis", axis}, {"theta", theta}};
  std::ostringstream series;
  series << "theta=" << theta;
  double last = 0.0;
  std::string tr;
  for (int m = 1; m <= m_max; ++m) {
    const double a = 1.0 - std::ldexp(1.0, -m);
    const SeminormValue b = besov_seminorm(curve, a, theta);
    last = std::pow(1.0 - a, 1.0 / theta) * b.value;
    res.trace.add(series.str(), m, a, last, target);
    tr = window(b.truncation);
  }
  if (lip.unbounded_at_scale) tr += " sup slope unbounded at the finest scale";
  const double gap = target > 0.0 ? std::fabs(last / target - 1.0) : 0.0;
  res.gap_report = make_report("k-l-gap", id, {{"p", p}, {"axis", axis}, {"theta", theta}, {"m", m_max}}, gap,
                               0.10, 1.0, tr);
  if (target == 0.0 && last == 0.0) res.gap_report.verdict = Verdict::degenerate;
  return res;
}

LimitResult verify_bbm(const GridFunction& f, const std::string& id, double p, int m_max) {
  if (f.dims() != 1) throw ParameterError("the BBM check is one-dimensional");
  if (m_max < 1) throw ParameterError("m_max must be positive");
  if (!(p * (1.0 - std::ldexp(1.0, -m_max)) < 1.0))
    throw ParameterError("alpha p must stay below 1 along the sweep");
  const double slope = lipschitz_seminorm(f, 0, 1.0, p).value;
  const double target = 2.0 / p * std::pow(slope, p);
  LimitResult res;
  res.trace.id = "bbm";
  res.trace.function_id = id;
  res.trace.params = {{"p", p}, {"cells", f.cell_count()}};
  double last = 0.0;
  for (int m = 1; m <= m_max; ++m) {
    const double a = 1.0 - std::ldexp(1.0, -m);
    last = (1.0 - a) * gagliardo_seminorm(f, a, p);
    res.trace.add("scaled-gagliardo", m, a, last, target);
  }
  const double gap = target > 0.0 ? std::fabs(last / target - 1.0) : 0.0;
  res.gap_report = make_report("bbm-gap", id, {{"p", p}, {"m", m_max}}, gap, 0.15, 1.0, "exact lattice integral");
  if (target == 0.0 && last == 0.0) res.gap_report.verdict = Verdict::degenerate;
  return res;
}

std::vector<InequalityReport> verify_bourgain(const GridFunction& f, const std::string& id, double p, double alpha,
                                              const VerifyContext& ctx) {
  if (!(alpha >= 0.5 && alpha < 1.0)) throw ParameterError("alpha must lie in [1/2, 1)");
  const double n = static_cast<double>(f.dims());
  if (!(alpha * p < n)) throw ParameterError("need p < n / alpha");
  const double ps = n * p / (n - alpha * p);
  const StepFunction fs = decreasing_rearrangement(f);
  const double G = gagliardo_seminorm(f, alpha, p);
  const double rhs = (1.0 - alpha) / std::pow(n - alpha * p, p - 1.0) * G;
  const Json params = {{"p", p}, {"alpha", alpha}, {"p_star", ps}};
  return {make_report("bourg", id, params, std::pow(lorentz_norm(fs, ps, ps), p), rhs, ctx.budget("bourg")),
          make_report("bourg-lorentz", id, params, std::pow(lorentz_norm(fs, ps, p), p), rhs,
                      ctx.budget("bourg-lorentz"))};
}

std::vector<InequalityReport> verify_lorentz_relations(const GridFunction& f, const std::string& id, double p,
                                                       const std::vector<double>& rs,
                                                       const std::vector<Permutation>& sigmas,
                                                       const VerifyContext& ctx) {
  std::vector<InequalityReport> out;
  const StepFunction fs = decreasing_rearrangement(f);
  std::vector<double> plain;
  for (double r : rs) plain.push_back(lorentz_norm(fs, p, r));
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = 0; j < rs.size(); ++j)
      if (rs[i] < rs[j])
        out.push_back(make_report("lorentz-monotone", id,
                                  {{"p", p}, {"r", json_number(rs[i])}, {"s", json_number(rs[j])}}, plain[j],
                                  plain[i], ctx.budget("lorentz-monotone")));
  for (const Permutation& s : sigmas) {
    const GridFunction g = iterated_rearrangement(f, s);
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const double mixed = mixed_lorentz_norm(g, p, rs[i]);
      const Json params = {{"p", p}, {"r", json_number(rs[i])}, {"sigma", s.str()}};
      if (rs[i] <= p)
        out.push_back(make_report("yats1", id, params, plain[i], mixed, ctx.budget("yats1")));
      else
        out.push_back(make_report("yats2", id, params, mixed, plain[i], ctx.budget("yats2")));
    }
  }
  return out;
}

// ---------------------------------------------------------------- appendix

std::vector<InequalityReport> verify_box_operator(const GridFunction& phi, const std::string& id,
                                                  const std::vector<double>& rs, const std::vector<double>& as) {
  std::vector<InequalityReport> out;
  const double n = static_cast<double>(phi.dims());
  for (double r : rs)
    for (double a : as) {
      const OperatorIntegrals I = box_operator_integrals(phi, r, a);
      out.push_back(make_report("oper", id, {{"r", r}, {"a", a}}, I.lhs,
                                std::pow(2.0, std::max(1.0, a) * n) * I.rhs, kHardBudget,
                                "gauss-legendre on rational pieces"));
    }
  const bool at_zero = std::all_of(phi.origin().begin(), phi.origin().end(), [](double o) { return o == 0.0; });
  if (at_zero && is_mdec(phi)) {
    double worst = -1.0, wl = 0.0, wr = 0.0;
    std::vector<double> x(phi.dims());
    for (std::size_t i = 0; i < phi.cell_count(); ++i) {
      if (phi[i] == 0.0) continue;
      const auto idx = phi.unravel(i);
      for (double off : {0.5, 1.0}) {  // midpoint and upper corner
        for (std::size_t k = 0; k < phi.dims(); ++k)
          x[k] = phi.origin()[k] + (static_cast<double>(idx[k]) + off) * phi.cell_sizes()[k];
        const double t = box_average(phi, x);
        if (phi[i] / t > worst) {
          worst = phi[i] / t;
          wl = phi[i];
          wr = t;
        }
      }
    }
    out.push_back(make_report("monotone", id, {{"points", "midpoints and upper corners"}}, wl, wr, kHardBudget));
  }
  return out;
}

double iter_lhs_power(const GridFunction& f, std::size_t axis, double p, double h, double mu) {
  if (!(mu > 1.0)) throw ParameterError("mu must exceed 1");
  if (!(h > 0.0)) throw ParameterError("h must be positive");
  const double c = f.cell_sizes()[axis];
  const std::size_t N = f.shape()[axis];
  const double end = static_cast<double>(N) * c;
  if (h >= end) return 0.0;
  std::vector<double> br{h, end};
  for (std::size_t i = 0; i <= N; ++i) {
    const double b = static_cast<double>(i) * c;
    for (double x : {b, b / mu})
      if (x > h && x < end) br.push_back(x);
  }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  struct Piece {
    std::size_t i1, i2;
    double weight;
  };
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const double m = 0.5 * (br[i] + br[i + 1]);
    const auto i1 = static_cast<std::size_t>(std::floor(m / c));
    const auto i2 = static_cast<std::size_t>(std::floor(mu * m / c));
    pieces.push_back({i1, i2, power_segment(1.0 - p, br[i], br[i + 1])});
  }
  const std::size_t st = f.stride(axis);
  double total = 0.0;
  for (std::size_t flat = 0; flat < f.cell_count(); ++flat) {
    if ((flat / st) % N != 0) continue;
    for (const Piece& pc : pieces) {
      const double a = pc.i1 < N ? f[flat + pc.i1 * st] : 0.0;
      const double b = pc.i2 < N ? f[flat + pc.i2 * st] : 0.0;
      if (a > b) total += std::pow(a - b, p) * pc.weight;
    }
  }
  return total * f.face_volume(axis);
}

std::vector<InequalityReport> verify_iter(const GridFunction& f, const std::string& id, double p,
                                          const std::vector<double>& hs, const std::vector<double>& mus) {
  for (double o : f.origin())
    if (o != 0.0) throw PreconditionError("(iter) needs a function on R_+^n with origin 0");
  if (!is_mdec(f)) throw PreconditionError("(iter) needs a function nonincreasing in every variable");
  std::vector<AxisDomain> half(f.dims(), AxisDomain::half_line);
  const GridFunction g = f.with_domains(half);
  std::vector<InequalityReport> out;
  for (std::size_t k = 0; k < g.dims(); ++k) {
    const ShiftProfile sp(g, k, p);
    for (double h : hs)
      for (double mu : mus) {
        const double lhs = std::pow(iter_lhs_power(g, k, p, h, mu), 1.0 / p);
        out.push_back(make_report("iter", id, {{"p", p}, {"axis", k}, {"h", h}, {"mu", mu}}, lhs,
                                  4.0 * mu * sp.modulus(h) / h, kHardBudget));
      }
  }
  return out;
}

}  // namespace agf
