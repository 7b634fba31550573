#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "agf/geometry.hpp"
#include "agf/grid.hpp"
#include "agf/norms.hpp"
#include "agf/rearrange.hpp"
#include "agf/report.hpp"

namespace agf {

/// Inequalities whose constant is explicit; their reports use kHardBudget
/// with the constant folded into the right-hand side.
bool is_hard_constant(const std::string& id);
/// Checks with a fixed acceptance threshold folded into the right-hand side
/// (budget 1).
bool is_threshold_check(const std::string& id);

struct VerifyContext {
  /// Calibrated constants; null means calibration mode, where budget-tier
  /// checks get an infinite budget and only their ratios matter.
  const BudgetTable* budgets = nullptr;
  bool explore_open_case = false;
  /// Throws FormatError for a budget-tier id missing from the table.
  double budget(const std::string& id) const;
};

// ---- moduli lemmas (hard constants)

/// (int): omega_k(delta) <= (3/delta) int_0^delta I_k(h) dh, every axis.
/// (steklov1)/(steklov2) at h = delta for every delta that is a lattice
/// multiple of the axis cell size.
std::vector<InequalityReport> verify_modulus_lemmas(const GridFunction& f, const std::string& id, double p,
                                                    const std::vector<double>& deltas);

/// (o-w2) for n = 1 (the grid is mapped onto [0, 1]; deltas above 1/2 are
/// skipped) and the iterated-rearrangement bound with constant 3^n for each
/// sigma, axis and delta.
std::vector<InequalityReport> verify_rearrangement_modulus(const GridFunction& f, const std::string& id,
                                                           double p, const std::vector<double>& deltas,
                                                           const std::vector<Permutation>& sigmas);

// ---- rearrangement estimates

/// Isotropic estimate with omega = max_k omega_k.
InequalityReport verify_isotropic_estimate(const GridFunction& f, const std::string& id, double p, double delta,
                                           const VerifyContext& ctx);

/// Left side of the isotropic estimate, exact on the step function f*.
double isotropic_estimate_lhs(const StepFunction& fstar, double p, std::size_t n, double delta);

/// Anisotropic estimates built on the gauge of f for sigma: for every axis
/// j and h in hs, the integral form and the sup form over Omega_j(h).
/// Also emits the exact gauge checks (product bound, Loomis-Whitney on
/// every set the construction produced).
std::vector<InequalityReport> verify_anisotropic_estimate(const GridFunction& f, const std::string& id, double p,
                                                          const AnisotropicGauge& gauge,
                                                          const std::vector<double>& hs, const VerifyContext& ctx);

// ---- embeddings

enum class NormFlavor { lorentz, mixed };

/// Plain (main12) or mixed (main1000) embedding, plus the exact Minkowski
/// step ||f||_{q,theta} <= (1 - 2^{-1/q})^{-1} J.
std::vector<InequalityReport> verify_embedding(const GridFunction& f, const std::string& id,
                                               const BesovParams& params, NormFlavor flavor,
                                               const Permutation& sigma, const VerifyContext& ctx);

struct EmbeddingSides {
  double lhs = 0.0;
  double rhs = 0.0;               // with the (1 - beta_j)^{1/theta_j} factors
  double rhs_without = 0.0;       // without them
  std::vector<double> seminorms;  // per axis
};
EmbeddingSides embedding_sides(const GridFunction& f, const BesovParams& params, NormFlavor flavor,
                               const Permutation& sigma);

struct SweepResult {
  LimitTrace trace;
  std::vector<InequalityReport> reports;
  bool truncated = false;  // the sweep left the admissible range
};

/// beta_j = 1 - 2^{-m} on the axes in `sweep_axes`, m = 1..m_max, other
/// exponents from `base`. Emits the per-point budget reports, a stability
/// check (with-factor ratios within 2x of m = 1), a control-growth check
/// (without factors, RHS/LHS grows at least 5x), and the Lipschitz corollary
/// at the endpoint.
SweepResult limiting_sweep(const GridFunction& f, const std::string& id, const BesovParams& base,
                           const std::vector<std::size_t>& sweep_axes, int m_max, const VerifyContext& ctx);

struct LimitResult {
  LimitTrace trace;
  InequalityReport gap_report;
};

/// (1 - alpha)^{1/theta} ||f||_{b^alpha_{p,theta;k}} against
/// (1/theta)^{1/theta} sup omega/delta for alpha = 1 - 2^{-m}; the gap at
/// m_max must stay below 10%.
LimitResult verify_limit_relations(const GridFunction& f, const std::string& id, std::size_t axis, double p,
                                   double theta, int m_max);

/// (1 - alpha) times the Gagliardo integral against (2/p) (sup omega/delta)^p
/// for n = 1, p = 1 (alpha p < 1 along the whole sweep); gap at m_max below 15%.
LimitResult verify_bbm(const GridFunction& f, const std::string& id, double p, int m_max);

/// Fractional Sobolev inequality in Lebesgue and Lorentz form with the
/// prefactor (1 - alpha)/(n - alpha p)^{p-1}.
std::vector<InequalityReport> verify_bourgain(const GridFunction& f, const std::string& id, double p, double alpha,
                                              const VerifyContext& ctx);

/// Lorentz monotonicity in the second index and the two mixed-norm
/// comparisons, for each r in rs and sigma in sigmas.
std::vector<InequalityReport> verify_lorentz_relations(const GridFunction& f, const std::string& id, double p,
                                                       const std::vector<double>& rs,
                                                       const std::vector<Permutation>& sigmas,
                                                       const VerifyContext& ctx);

// ---- appendix operators (hard constants)

/// (oper) for every r in rs and a in as; (monotone) when phi is in M_dec.
std::vector<InequalityReport> verify_box_operator(const GridFunction& phi, const std::string& id,
                                                  const std::vector<double>& rs, const std::vector<double>& as);

/// Left side of (iter) for axis k, before the 1/p root.
double iter_lhs_power(const GridFunction& f, std::size_t axis, double p, double h, double mu);

/// (iter) with constant 4 mu for every axis, h in hs and mu in mus. f must be
/// in M_dec with origin 0.
std::vector<InequalityReport> verify_iter(const GridFunction& f, const std::string& id, double p,
                                          const std::vector<double>& hs, const std::vector<double>& mus);

}  // namespace agf
