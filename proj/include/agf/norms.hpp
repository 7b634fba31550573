#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "agf/grid.hpp"
#include "agf/moduli.hpp"
#include "agf/rearrange.hpp"
#include "agf/step_function.hpp"

namespace agf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// (int_0^inf [t^{1/p} g(t)]^r dt/t)^{1/r}; r = inf gives sup_t t^{1/p} g(t).
/// Exact on step functions (g need not be monotone).
double lorentz_norm(const StepFunction& g, double p, double r);

/// Mixed norm over R_+^n of a function already in M_dec:
/// (int [pi(x)^{1/p} g(x)]^r dx / pi(x))^{1/r}, pi(x) = x_1 ... x_n.
/// Cell coordinates are taken from the grid origin, which must be >= 0.
double mixed_lorentz_norm(const GridFunction& g, double p, double r);
/// Same with g = R_sigma f computed first.
double mixed_lorentz_norm(const GridFunction& f, double p, double r, const Permutation& sigma);

/// What to put below the finest scale c of a modulus curve.
///  - linear_continuation: omega(t) = omega(c) t / c, the behaviour of the
///    continuous function the grid samples.
///  - exact: omega(t)^p = omega(c)^p t / c, the step representative itself.
///  - drop: nothing (strict truncation at c).
enum class HeadRule { linear_continuation, exact, drop };
const char* to_string(HeadRule h);

/// Integration window and the contribution of each piece to the theta-th
/// power of the seminorm, divided by (sup form)^theta to stay in range.
struct Truncation {
  double lower = 0.0;  // finest scale c
  double upper = 0.0;  // last breakpoint; omega is constant beyond
  HeadRule head = HeadRule::linear_continuation;
  double head_part = 0.0;
  double body_part = 0.0;
  double tail_part = 0.0;
  std::string str() const;
};

struct SeminormValue {
  double value = 0.0;
  double argmax_scale = 0.0;        // for sup forms
  bool unbounded_at_scale = false;  // sup at the finest scale and still growing there
  Truncation truncation;
};

/// (int_0^inf (t^{-alpha} omega(t))^theta dt/t)^{1/theta}, theta = inf giving
/// the sup form.
SeminormValue besov_seminorm(const ModulusCurve& omega, double alpha, double theta,
                             HeadRule head = HeadRule::linear_continuation);
SeminormValue besov_seminorm(const GridFunction& f, std::size_t axis, double alpha, double theta, double p,
                             HeadRule head = HeadRule::linear_continuation);

/// sup_{delta >= c} omega(delta) / delta^alpha with alpha in (0, 1].
SeminormValue lipschitz_seminorm(const ModulusCurve& omega, double alpha);
SeminormValue lipschitz_seminorm(const GridFunction& f, std::size_t axis, double alpha, double p);

/// int int |f(x) - f(y)|^p / |x - y|^{n + alpha p} dx dy for the
/// piecewise-constant representative (the p-th power of the seminorm).
/// Requires alpha p < 1 (otherwise the integral of a step function diverges),
/// every axis on the line, and at most 1e4 cells.
double gagliardo_seminorm(const GridFunction& f, double alpha, double p);

/// Midpoint double sum over cell pairs with the near-diagonal pairs refined
/// 4x; slow reference used by tests.
double gagliardo_midpoint_reference(const GridFunction& f, double alpha, double p);

struct BesovParams {
  double p = 1.0;
  std::size_t n = 1;
  std::vector<double> beta_j;
  std::vector<double> theta_j;  // may hold inf
  double beta = 0.0;
  double theta = 0.0;
  double q = 0.0;
  bool admissible = false;   // 1 <= p < n / beta
  bool open_case = false;    // some theta_j < p
  bool usable() const { return admissible && !open_case; }
};

/// Derived exponents beta, theta and q = np/(n - beta p) with 1/inf = 0.
/// Throws ParameterError for beta_j outside (0,1), theta_j <= 0 or p < 1.
BesovParams derive_params(double p, const std::vector<double>& beta_j, const std::vector<double>& theta_j);

struct LipschitzParams {
  double p = 1.0;
  std::size_t n = 1;
  std::vector<double> alpha_k;
  double alpha = 0.0;
  std::size_t nu = 0;   // axes with alpha_k = 1
  double q_star = 0.0;  // np / (n - alpha p)
  double s = kInf;      // np / (nu alpha)
  bool admissible = false;
};

LipschitzParams derive_lipschitz_params(double p, const std::vector<double>& alpha_k);

}  // namespace agf
