#include "agf/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "agf/error.hpp"
#include "agf/geometry.hpp"
#include "agf/grid_io.hpp"
#include "agf/norms.hpp"
#include "agf/rearrange.hpp"
#include "agf/verify.hpp"

namespace agf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"modulus-lemmas", {"p", "delta", "sigma", "family", "max_cells"}},
      {"rearr-estimate", {"p", "delta", "family", "max_cells"}},
      {"aniso-estimate", {"p", "h", "sigma", "t_grid", "family", "max_cells"}},
      {"embedding", {"point", "sigma", "flavor", "family", "max_cells"}},
      {"limit-sweep", {"point", "axes", "m_max", "family", "max_cells"}},
      {"bbm",
       {"kl_p", "kl_theta", "kl_m", "kl_family", "kl_max_cells", "bbm_m", "bbm_family", "bbm_max_cells", "bourgain_p",
        "bourgain_alpha", "bourgain_family", "bourgain_max_cells"}},
      {"appendix",
       {"oper_r", "oper_a", "iter_p", "iter_h", "iter_mu", "lorentz_p", "lorentz_r", "sigma", "family",
        "max_cells"}},
  };
  return keys;
}

/// Decimal, "a/b" or "inf".
double parse_real(const std::string& text) {
  const std::string s = trim(text);
  if (s == "inf") return kInf;
  const auto slash = s.find('/');
  if (slash != std::string::npos) return parse_real(s.substr(0, slash)) / parse_real(s.substr(slash + 1));
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || std::isnan(v)) throw FormatError("bad number '" + s + "'");
  return v;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::istringstream is(text);
  for (std::string e; std::getline(is, e, ',');) out.push_back(parse_real(e));
  if (out.empty()) throw FormatError("empty list");
  return out;
}

int parse_int(const std::string& text) {
  const double v = parse_real(text);
  if (v != std::floor(v) || std::fabs(v) > 1e6) throw FormatError("expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

Permutation parse_sigma(const std::string& text) {
  std::vector<std::size_t> order;
  std::istringstream is(trim(text));
  for (std::string e; std::getline(is, e, '-');) {
    const int v = parse_int(e);
    if (v < 0) throw FormatError("bad permutation '" + text + "'");
    order.push_back(static_cast<std::size_t>(v));
  }
  try {
    return Permutation(order);
  } catch (const Error&) {
    throw FormatError("bad permutation '" + text + "'");
  }
}

// ---- typed plans

struct Selector {
  std::vector<std::string> families;
  std::size_t max_cells = 4096;
  std::function<bool(const CorpusMember&)> structural = [](const CorpusMember&) { return true; };

  bool accepts(const CorpusMember& m) const {
    if (!families.empty() && std::find(families.begin(), families.end(), m.spec.family) == families.end())
      return false;
    return m.f.cell_count() <= max_cells && structural(m);
  }
};

std::vector<double> reals_or(const ExperimentConfig& c, const std::string& key, std::vector<double> fallback) {
  const auto vals = c.values(key);
  if (vals.empty()) return fallback;
  std::vector<double> out;
  for (const auto& v : vals)
    for (double x : parse_reals(v)) out.push_back(x);
  return out;
}

int int_or(const ExperimentConfig& c, const std::string& key, int fallback) {
  const auto vals = c.values(key);
  if (vals.empty()) return fallback;
  if (vals.size() > 1) throw FormatError("'" + key + "' given more than once");
  return parse_int(vals.front());
}

Selector selector(const ExperimentConfig& c, const std::string& family_key, const std::string& cells_key,
                  std::size_t default_cells, std::function<bool(const CorpusMember&)> structural) {
  Selector s;
  for (const auto& v : c.values(family_key)) {
    std::istringstream is(v);
    for (std::string f; is >> f;) {
      if (std::find(corpus_families().begin(), corpus_families().end(), f) == corpus_families().end())
        throw FormatError("unknown family '" + f + "' in " + family_key);
      s.families.push_back(f);
    }
  }
  const int cells = int_or(c, cells_key, static_cast<int>(default_cells));
  if (cells < 1) throw FormatError(cells_key + " must be positive");
  s.max_cells = static_cast<std::size_t>(cells);
  s.structural = std::move(structural);
  return s;
}

std::vector<Permutation> sigmas_of(const ExperimentConfig& c, const std::string& key) {
  std::vector<Permutation> out;
  for (const auto& v : c.values(key)) out.push_back(parse_sigma(v));
  return out;
}

/// Configured permutations of the member's dimension, or all of them.
std::vector<Permutation> sigmas_for(const std::vector<Permutation>& given, std::size_t n) {
  std::vector<Permutation> out;
  for (const auto& s : given)
    if (s.size() == n) out.push_back(s);
  return out.empty() ? Permutation::all(n) : out;
}

void require_positive(const std::vector<double>& xs, const std::string& what) {
  for (double x : xs)
    if (!(x > 0.0) || std::isinf(x)) throw ParameterError(what + " must be finite and positive");
}

void require_p(const std::vector<double>& ps) {
  for (double p : ps)
    if (!(p >= 1.0) || std::isinf(p)) throw ParameterError("p must satisfy 1 <= p < inf");
}

struct PointSpec {
  double p = 1.0;
  std::vector<double> beta;
  std::vector<double> theta;
  std::string text;
};

PointSpec parse_point(const std::string& text) {
  PointSpec pt;
  pt.text = text;
  std::istringstream is(text);
  bool have_beta = false, have_theta = false;
  for (std::string tok; is >> tok;) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw FormatError("expected key=value in point '" + text + "'");
    const std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
    if (k == "p")
      pt.p = parse_real(v);
    else if (k == "beta")
      pt.beta = parse_reals(v), have_beta = true;
    else if (k == "theta")
      pt.theta = parse_reals(v), have_theta = true;
    else
      throw FormatError("unknown point field '" + k + "'");
  }
  if (!have_beta || !have_theta || pt.beta.size() != pt.theta.size())
    throw FormatError("point needs beta and theta of equal length: '" + text + "'");
  return pt;
}

BesovParams checked_params(const PointSpec& pt, const RunOptions& opt) {
  const BesovParams bp = derive_params(pt.p, pt.beta, pt.theta);
  if (!bp.admissible) throw ParameterError("inadmissible point '" + pt.text + "': need p < n / beta");
  if (bp.open_case && !opt.explore_open_case)
    throw ParameterError("point '" + pt.text + "' has theta_j < p; pass --explore-open-case to log it");
  return bp;
}

std::vector<PointSpec> points_of(const ExperimentConfig& c, const std::string& key,
                                 const std::vector<std::string>& fallback) {
  auto vals = c.values(key);
  if (vals.empty()) vals = fallback;
  std::vector<PointSpec> out;
  for (const auto& v : vals) out.push_back(parse_point(v));
  return out;
}

// ---- jobs

struct JobResult {
  std::vector<InequalityReport> reports;
  std::vector<LimitTrace> traces;
  std::string gauge_rows;
};
using Job = std::function<JobResult()>;

std::vector<JobResult> run_jobs(const std::vector<Job>& jobs) {
  std::vector<JobResult> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  const long count = static_cast<long>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      results[static_cast<std::size_t>(i)] = jobs[static_cast<std::size_t>(i)]();
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

// ---- experiments. Each builder either validates (corpus empty) or emits jobs.

using Members = std::vector<const CorpusMember*>;

Members pick(const std::vector<CorpusMember>& corpus, const Selector& s) {
  Members out;
  for (const auto& m : corpus)
    if (s.accepts(m)) out.push_back(&m);
  return out;
}


bool any_member(const CorpusMember&) { return true; }

VerifyContext context(const RunOptions& opt) {
  VerifyContext ctx;
  ctx.budgets = opt.budgets;
  ctx.explore_open_case = opt.explore_open_case;
  return ctx;
}

std::vector<Job> modulus_lemmas(const ExperimentConfig& c, const std::vector<CorpusMember>& corpus,
                                const RunOptions&) {
  const std::string x = "modulus-lemmas.";
  const auto ps = reals_or(c, x + "p", {1.0, 2.0});
  const auto deltas = reals_or(c, x + "delta", {1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2});
  const auto given = sigmas_of(c, x + "sigma");
  require_p(ps);
  require_positive(deltas, "delta");
  const Selector sel = selector(c, x + "family", x + "max_cells", 4096, any_member);
  std::vector<Job> jobs;
  for (const CorpusMember* m : pick(corpus, sel))
    for (double p : ps)
      jobs.push_back([=] {
        JobResult r;
        r.reports = verify_modulus_lemmas(m->f, m->id, p, deltas);
        auto more = verify_rearrangement_modulus(m->f, m->id, p, deltas, sigmas_for(given, m->f.dims()));
        r.reports.insert(r.reports.end(), more.begin(), more.end());
        return r;
      });
  return jobs;
}

std::vector<Job> rearr_estimate(const ExperimentConfig& c, const std::vector<CorpusMember>& corpus,
                                const RunOptions& opt) {
  const std::string x = "rearr-estimate.";
  const auto ps = reals_or(c, x + "p", {1.0, 2.0});
  const auto deltas = reals_or(c, x + "delta", {1.0 / 16, 1.0 / 8, 1.0 / 4});
  require_p(ps);
  require_positive(deltas, "delta");
  const Selector sel = selector(c, x + "family", x + "max_cells", 4096, any_member);
  std::vector<Job> jobs;
  for (const CorpusMember* m : pick(corpus, sel))
    for (double p : ps)
      jobs.push_back([=] {
        JobResult r;
        for (double d : deltas) r.reports.push_back(verify_isotropic_estimate(m->f, m->id, p, d, context(opt)));
        return r;
      });
  return jobs;
}

std::vector<Job> aniso_estimate(const ExperimentConfig& c, const std::vector<CorpusMember>& corpus,
                                const RunOptions& opt) {
  const std::string x = "aniso-estimate.";
  const auto ps = reals_or(c, x + "p", {1.0});
  const auto hs = reals_or(c, x + "h", {1.0 / 2, 1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64});
  const auto given = sigmas_of(c, x + "sigma");
  require_p(ps);
  require_positive(hs, "h");
  TGrid grid = TGrid::even_lattice;
  for (const auto& v : c.values(x + "t_grid")) {
    if (v == "even")
      grid = TGrid::even_lattice;
    else if (v == "dyadic")
      grid = TGrid::dyadic;
    else
      throw FormatError("t_grid must be 'even' or 'dyadic'");
  }
  const Selector sel = selector(c, x + "family", x + "max_cells", 4096, any_member);
  std::vector<Job> jobs;
  for (const CorpusMember* m : pick(corpus, sel))
    for (const Permutation& sigma : sigmas_for(given, m->f.dims()))
      jobs.push_back([=] {
        JobResult r;
        const AnisotropicGauge gauge = build_gauge(m->f, sigma, grid);
        for (double p : ps) {
          auto reps = verify_anisotropic_estimate(m->f, m->id, p, gauge, hs, context(opt));
          r.reports.insert(r.reports.end(), reps.begin(), reps.end());
        }
        std::ostringstream os;
        gauge.write_csv(os);
        std::istringstream lines(os.str());
        std::string line;
        std::getline(lines, line);  // header
        std::ostringstream rows;
        while (std::getline(lines, line)) rows << csv_quote(m->id) << ',' << sigma.str() << ',' << line << '\n';
        r.gauge_rows = rows.str();
        return r;
      });
  return jobs;
}

std::vector<std::string> default_points() {
  return {"p=1 beta=0.5,0.5 theta=1,1",    "p=1 beta=0.5,0.5 theta=2,2",   "p=1 beta=0.25,0.75 theta=1,1",
          "p=1 beta=0.25,0.75 theta=1,4",  "p=1 beta=0.75,0.75 theta=inf,inf", "p=1.5 beta=0.5,0.5 theta=1.5,3"};
}

std::vector<Job> embedding(const ExperimentConfig& c, const std::vector<CorpusMember>& corpus,
                           const RunOptions& opt) {
  const std::string x = "embedding.";
  const auto points = points_of(c, x + "point", default_points());
  std::vector<std::pair<PointSpec, BesovParams>> checked;
  for (const auto& pt : points) checked.emplace_back(pt, checked_params(pt, opt));
  const auto given = sigmas_of(c, x + "sigma");
  std::vector<NormFlavor> flavors;
  for (const auto& v : c.values(x + "flavor")) {
    if (v == "lorentz")
      flavors.push_back(NormFlavor::lorentz);
    else if (v == "mixed")
      flavors.push_back(NormFlavor::mixed);
    else
      throw FormatError("flavor must be 'lorentz' or 'mixed'");
  }
  if (flavors.empty()) flavors = {NormFlavor::lorentz, NormFlavor::mixed};
  const Selector sel = selector(c, x + "family", x + "max_cells", 4096, any_member);
  std::vector<Job> jobs;
  for (const CorpusMember* m : pick(corpus, sel))
    for (const auto& [pt, bp] : checked) {
      if (bp.n != m->f.dims()) continue;
      for (NormFlavor fl : flavors) {
        const auto sigmas = fl == NormFlavor::lorentz ? std::vector<Permutation>{Permutation::identity(bp.n)}
                                                      : sigmas_for(given, bp.n);
        for (const Permutation& sigma : sigmas)
          jobs.push_back([=, bp = bp] {
            JobResult r;
            r.reports = verify_embedding(m->f, m->id, bp, fl, sigma, context(opt));
            return r;
          });
      }
    }
  return jobs;
}

std::vector<Job> limit_sweep(const ExperimentConfig& c, const std::vector<CorpusMember>& corpus,
                             const RunOptions& opt) {
  const std::string x = "limit-sweep.";
  const auto points = points_of(c, x + "point", {"p=1 beta=0.5,0.5 theta=1,1"});
  std::vector<BesovParams> checked;
  for (const auto& pt : points) checked.push_back(checked_params(pt, opt));
  std::vector<std::size_t> axes;
  for (double a : reals_or(c, x + "axes", {})) {
    if (a < 0 || a != std::floor(a)) throw FormatError("axes must be nonnegative integers");
    axes.push_back(static_cast<std::size_t>(a));
  }
  for (const auto& bp : checked)
    for (std::size_t a : axes)
      if (a >= bp.n) throw ParameterError("sweep axis out of range");
  const int m_max = int_or(c, x + "m_max", 8);
  if (m_max < 1) throw ParameterError("m_max must be positive");
  const Selector sel = selector(c, x + "family", x + "max_cells", 4096,
                                [](const CorpusMember& m) { return m.spec.family == "hat-multilinear"; });
  std::vector<Job> jobs;
  for (const CorpusMember* m : pick(corpus, sel))
    for (const auto& bp : checked) {
      if (bp.n != m->f.dims()) continue;
      std::vector<std::size_t> sweep = axes;
      if (sweep.empty())
        for (std::size_t k = 0; k < bp.n; ++k) sweep.push_back(k);
      jobs.push_back([=] {
        SweepResult s = limiting_sweep(m->f, m->id, bp, sweep, m_max, context(opt));
        JobResult r;
        r.reports = std::move(s.reports);
        r.traces.push_back(std::move(s.trace));
        return r;
      });
    }
  return jobs;
}

std::vector<Job> bbm(const ExperimentConfig& c, const std::vector<CorpusMember>& corpus, const RunOptions& opt) {
  const std::string x = "bbm.";
  const auto kl_p = reals_or(c, x + "kl_p", {1.0});
  const auto kl_theta = reals_or(c, x + "kl_theta", {1.0, 2.0});
  const int kl_m = int_or(c, x + "kl_m", 8);
  const int bbm_m = int_or(c, x + "bbm_m", 6);
  const auto bourgain_p = reals_or(c, x + "bourgain_p", {1.0});
  const auto alphas = reals_or(c, x + "bourgain_alpha", {0.5, 0.75});
  require_p(kl_p);
  require_p(bourgain_p);
  require_positive(kl_theta, "theta");
  if (kl_m < 1 || bbm_m < 1) throw ParameterError("sweep lengths must be positive");
  // The Gagliardo integral converges only for alpha p < 1.
  if (1.0 - std::ldexp(1.0, -bbm_m) >= 1.0) throw ParameterError("bbm_m too large");
  for (double a : alphas) {
    if (!(a >= 0.5 && a < 1.0)) throw ParameterError("bourgain_alpha must lie in [1/2, 1)");
    for (double p : bourgain_p)
      if (!(a * p < 1.0)) throw ParameterError("bourgain_alpha * bourgain_p must stay below 1");
  }
  auto hat = [](const CorpusMember& m) { return m.spec.family == "hat-multilinear"; };
  const Selector kl_sel = selector(c, x + "kl_family", x + "kl_max_cells", 4096,
                                   [hat](const CorpusMember& m) { return hat(m) && m.f.dims() == 1; });
  const Selector bbm_sel = selector(c, x + "bbm_family", x + "bbm_max_cells", 64,
                                    [hat](const CorpusMember& m) { return hat(m) && m.f.dims() == 1; });
  const Selector bourg_sel = selector(c, x + "bourgain_family", x + "bourgain_max_cells", 1024,
                                      [hat](const CorpusMember& m) { return hat(m) && m.f.dims() <= 2; });
  std::vector<Job> jobs;
  for (const CorpusMember* m : pick(corpus, kl_sel))
    for (double p : kl_p)
      for (double th : kl_theta)
        jobs.push_back([=] {
          LimitResult l = verify_limit_relations(m->f, m->id, 0, p, th, kl_m);
          JobResult r;
          r.reports.push_back(std::move(l.gap_report));
          r.traces.push_back(std::move(l.trace));
          return r;
        });
  for (const CorpusMember* m : pick(corpus, bbm_sel))
    jobs.push_back([=] {
      LimitResult l = verify_bbm(m->f, m->id, 1.0, bbm_m);
      JobResult r;
      r.reports.push_back(std::move(l.gap_report));
      r.traces.push_back(std::move(l.trace));
      return r;
    });
  for (const CorpusMember* m : pick(corpus, bourg_sel))
    for (double p : bourgain_p)
      for (double a : alphas)
        jobs.push_back([=] {
          JobResult r;
          r.reports = verify_bourgain(m->f, m->id, p, a, context(opt));
          return r;
        });
  return jobs;
}

std::vector<Job> appendix(const ExperimentConfig& c, const std::vector<CorpusMember>& corpus,
                          const RunOptions& opt) {
  const std::string x = "appendix.";
  const auto rs = reals_or(c, x + "oper_r", {1.0, 2.0});
  const auto as = reals_or(c, x + "oper_a", {-0.5, 0.0, 1.0});
  const auto iter_p = reals_or(c, x + "iter_p", {1.0, 2.0});
  const auto iter_h = reals_or(c, x + "iter_h", {1.0 / 8, 1.0 / 4});
  const auto iter_mu = reals_or(c, x + "iter_mu", {2.0, 4.0});
  const auto lorentz_p = reals_or(c, x + "lorentz_p", {1.0, 2.0});
  const auto lorentz_r = reals_or(c, x + "lorentz_r", {1.0, 1.5, 2.0, 4.0});
  const auto given = sigmas_of(c, x + "sigma");
  for (double r : rs)
    if (!(r >= 1.0)) throw ParameterError("oper_r must be at least 1");
  for (double a : as)
    if (!(a > -1.0) || std::isinf(a)) throw ParameterError("oper_a must exceed -1");
  require_p(iter_p);
  require_p(lorentz_p);
  require_positive(iter_h, "iter_h");
  for (double mu : iter_mu)
    if (!(mu > 1.0) || std::isinf(mu)) throw ParameterError("iter_mu must exceed 1");
  for (double r : lorentz_r)
    if (!(r > 0.0)) throw ParameterError("lorentz_r must be positive");
  const Selector sel = selector(c, x + "family", x + "max_cells", 1024,
                                [](const CorpusMember& m) { return m.f.dims() <= 2; });
  std::vector<Job> jobs;
  for (const CorpusMember* m : pick(corpus, sel)) {
    jobs.push_back([=] {
      JobResult r;
      r.reports = verify_box_operator(m->f, m->id, rs, as);
      if (is_mdec(m->f))
        for (double p : iter_p) {
          auto more = verify_iter(m->f, m->id, p, iter_h, iter_mu);
          r.reports.insert(r.reports.end(), more.begin(), more.end());
        }
      return r;
    });
    for (double p : lorentz_p)
      jobs.push_back([=] {
        JobResult r;
        r.reports = verify_lorentz_relations(m->f, m->id, p, lorentz_r, sigmas_for(given, m->f.dims()), context(opt));
        return r;
      });
  }
  return jobs;
}

using Builder = std::vector<Job> (*)(const ExperimentConfig&, const std::vector<CorpusMember>&, const RunOptions&);

Builder builder(const std::string& name) {
  if (name == "modulus-lemmas") return modulus_lemmas;
  if (name == "rearr-estimate") return rearr_estimate;
  if (name == "aniso-estimate") return aniso_estimate;
  if (name == "embedding") return embedding;
  if (name == "limit-sweep") return limit_sweep;
  if (name == "bbm") return bbm;
  if (name == "appendix") return appendix;
  throw FormatError("unknown experiment '" + name + "'");
}

std::string plot_data(const ExperimentOutput& out, std::vector<std::string>& titles) {
  std::ostringstream os;
  os << "# block 0: report row, ratio, budget (finite budgets, non-degenerate rows)\n";
  for (std::size_t i = 0; i < out.reports.size(); ++i) {
    const auto& r = out.reports[i];
    if (r.verdict == Verdict::degenerate || !std::isfinite(r.budget) || !std::isfinite(r.ratio)) continue;
    os << i << ' ' << fmt_double(r.ratio) << ' ' << fmt_double(r.budget) << '\n';
  }
  for (const auto& t : out.traces) {
    std::vector<std::string> seen;
    for (const auto& p : t.points)
      if (std::find(seen.begin(), seen.end(), p.series) == seen.end()) seen.push_back(p.series);
    for (const auto& s : seen) {
      titles.push_back(t.id + " " + t.function_id + " " + s);
      os << "\n\n# block " << titles.size() << ": " << titles.back() << " (m, value, target)\n";
      for (const auto& p : t.series(s))
        os << p.m << ' ' << fmt_double(p.value) << ' ' << fmt_double(p.target) << '\n';
    }
  }
  return os.str();
}

std::string plot_script(const std::vector<std::string>& titles) {
  std::ostringstream os;
  os << "# gnuplot script; run from this directory: gnuplot plot.gp\n"
     << "set terminal pngcairo size 1000,650\n"
     << "set output 'ratios.png'\n"
     << "set xlabel 'report row'\nset ylabel 'ratio'\nset logscale y\n"
     << "plot 'plot.dat' index 0 using 1:2 with points pt 7 ps 0.5 title 'ratio', \\\n"
     << "     '' index 0 using 1:3 with lines title 'budget'\n";
  if (!titles.empty()) {
    os << "set output 'traces.png'\nset xlabel 'm'\nset ylabel 'value'\nunset logscale y\nset key outside\n"
       << "plot ";
    for (std::size_t i = 0; i < titles.size(); ++i) {
      std::string t = titles[i];
      std::replace(t.begin(), t.end(), '\'', '"');
      os << (i ? ", \\\n     " : "") << "'plot.dat' index " << i + 1 << " using 1:2 with linespoints title '" << t
         << "'";
    }
    os << '\n';
  }
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ResourceError("cannot write " + path.string());
  os << content;
  if (!os) throw ResourceError("write failed for " + path.string());
}

}  // namespace

std::vector<std::string> ExperimentConfig::values(const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries)
    if (k == key) out.push_back(v);
  return out;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw FormatError(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw FormatError(where + "empty key or value");
    try {
      if (key == "seed") {
        if (c.seed_given) throw FormatError("seed given more than once");
        std::size_t used = 0;
        try {
          c.seed = std::stoull(value, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != value.size()) throw FormatError("bad seed '" + value + "'");
        c.seed_given = true;
      } else if (key == "corpus") {
        c.corpus.push_back(parse_corpus_spec(value));
      } else if (key == "output") {
        c.output_dir = value;
      } else if (key == "budget") {
        c.budget_path = value;
      } else {
        const auto dot = key.find('.');
        if (dot == std::string::npos) throw FormatError("unknown key '" + key + "'");
        const auto it = allowed_keys().find(key.substr(0, dot));
        if (it == allowed_keys().end() || !it->second.count(key.substr(dot + 1)))
          throw FormatError("unknown key '" + key + "'");
        c.entries.emplace_back(key, value);
      }
    } catch (const FormatError& e) {
      throw FormatError(where + e.what());
    }
  }
  if (!c.seed_given) throw FormatError("config must set 'seed'");
  if (c.corpus.empty()) throw FormatError("config has no corpus entries");
  for (auto& s : c.corpus)
    if (!s.seed_given) s.seed = c.seed;
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open config " + path);
  return parse_config(is);
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"modulus-lemmas", "rearr-estimate", "aniso-estimate", "embedding",
                                              "limit-sweep",    "bbm",            "appendix"};
  return names;
}

bool needs_budgets(const std::string& experiment) { return experiment != "modulus-lemmas"; }

void validate_plan(const ExperimentConfig& config, const std::vector<std::string>& experiments,
                   const RunOptions& options) {
  for (const auto& e : experiments) builder(e)(config, {}, options);
}

ExperimentOutput run_experiment(const std::string& name, const ExperimentConfig& config,
                                const std::vector<CorpusMember>& corpus, const RunOptions& options) {
  const std::vector<Job> jobs = builder(name)(config, corpus, options);
  ExperimentOutput out;
  out.name = name;
  std::string gauge_rows;
  for (auto& r : run_jobs(jobs)) {
    out.reports.insert(out.reports.end(), std::make_move_iterator(r.reports.begin()),
                       std::make_move_iterator(r.reports.end()));
    out.traces.insert(out.traces.end(), std::make_move_iterator(r.traces.begin()),
                      std::make_move_iterator(r.traces.end()));
    gauge_rows += r.gauge_rows;
  }
  if (!gauge_rows.empty())
    out.gauge_csv = "function_id,sigma,t,j,mu_j,u_j,achieved_G_measure_j,projection_measure_j\n" + gauge_rows;
  return out;
}

void write_outputs(const ExperimentOutput& out, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path d(dir);
  std::error_code ec;
  fs::create_directories(d, ec);
  if (ec) throw ResourceError("cannot create " + dir + ": " + ec.message());
  {
    std::ostringstream os;
    write_reports_csv(os, out.reports);
    write_file(d / "reports.csv", os.str());
  }
  {
    std::ostringstream os;
    write_traces_csv(os, out.traces);
    write_file(d / "traces.csv", os.str());
  }
  if (!out.gauge_csv.empty()) write_file(d / "gauge.csv", out.gauge_csv);
  std::ostringstream summary;
  summary << "experiment " << out.name << ": " << out.reports.size() << " reports, " << out.traces.size()
          << " traces\n\n"
          << summary_table(out.reports);
  write_file(d / "summary.txt", summary.str());
  std::vector<std::string> titles;
  write_file(d / "plot.dat", plot_data(out, titles));
  write_file(d / "plot.gp", plot_script(titles));
}

BudgetTable calibrate(const std::vector<ExperimentOutput>& outputs, const std::string& corpus_hash) {
  BudgetTable t;
  t.corpus_hash = corpus_hash;
  std::map<std::string, double> worst;
  for (const auto& o : outputs)
    for (const auto& r : o.reports) {
      if (is_hard_constant(r.id) || is_threshold_check(r.id)) continue;
      if (r.verdict == Verdict::degenerate || r.verdict == Verdict::logged) continue;
      if (!std::isfinite(r.ratio))
        throw PreconditionError("calibration saw an unbounded ratio for '" + r.id + "' on " + r.function_id);
      auto [it, inserted] = worst.emplace(r.id, r.ratio);
      if (!inserted) it->second = std::max(it->second, r.ratio);
    }
  for (const auto& [id, w] : worst) {
    if (!(w > 0.0)) throw PreconditionError("calibration saw only zero ratios for '" + id + "'");
    t.budgets[id] = 2.0 * w;
  }
  return t;
}

}  // namespace agf
