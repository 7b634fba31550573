#include <doctest.h>

#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "agf/error.hpp"
#include "agf/norms.hpp"
#include "test_util.hpp"

using namespace agf;

namespace {

// H'' = -u^{-1-s}: int_a^b int_c^d (y - x)^{-1-s} dy dx = H(d-b) - H(d-a) - H(c-b) + H(c-a), b <= c.
double H(double u, double s) { return u <= 0.0 ? 0.0 : std::pow(u, 1.0 - s) / (s * (1.0 - s)); }
double pair_integral(double a, double b, double c, double d, double s) {
  return H(d - b, s) - H(d - a, s) - H(c - b, s) + H(c - a, s);
}
double right_tail(double a, double b, double c, double s) { return H(c - a, s) - H(c - b, s); }

/// Closed-form Gagliardo integral of a 1-D step function.
double gagliardo_1d(const GridFunction& f, double alpha, double p) {
  const double s = alpha * p, c = f.cell_sizes()[0];
  const std::size_t N = f.cell_count();
  double total = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double a = i * c, b = a + c;
    for (std::size_t j = i + 1; j < N; ++j)
      total += 2.0 * std::pow(std::fabs(f[i] - f[j]), p) * pair_integral(a, b, j * c, j * c + c, s);
    // Both half-lines outside the grid, counted for (x, y) and (y, x).
    const double L = N * c;
    total += 2.0 * std::pow(f[i], p) * (right_tail(a, b, L, s) + right_tail(L - b, L - a, L, s));
  }
  return total;
}

/// Unit square indicator in 2-D: 2 int_Q (1/s) int_0^{2 pi} r_b(x, phi)^{-s} dphi dx, with
/// r_b the distance to the boundary along phi. The graded substitution x = t^6 / 2 on each
/// quarter smooths the d^{-s} growth near the edges.
double square_polar(double s) {
  using G = boost::math::quadrature::gauss<double, 40>;
  auto angular = [&](double x, double y) {
    const double corners[4] = {std::atan2(1.0 - y, 1.0 - x), std::atan2(1.0 - y, -x),
                               std::atan2(-y, -x) + 2.0 * M_PI, std::atan2(-y, 1.0 - x) + 2.0 * M_PI};
    auto rb = [&](double phi) {
      const double cx = std::cos(phi), cy = std::sin(phi);
      double r = INFINITY;
      if (cx > 0) r = std::min(r, (1.0 - x) / cx);
      if (cx < 0) r = std::min(r, -x / cx);
      if (cy > 0) r = std::min(r, (1.0 - y) / cy);
      if (cy < 0) r = std::min(r, -y / cy);
      return std::pow(r, -s);
    };
    double total = 0.0;
    double lo = corners[3] - 2.0 * M_PI;
    for (double hi : corners) {
      total += G::integrate(rb, lo, hi);
      lo = hi;
    }
    return total / s;
  };
  auto outer = [&](double tx) {
    auto x = [](double t) { return 0.5 * std::pow(t, 6); };
    auto dx = [](double t) { return 3.0 * std::pow(t, 5); };
    return G::integrate([&](double ty) { return angular(x(tx), x(ty)) * dx(tx) * dx(ty); }, 0.0, 1.0);
  };
  return 2.0 * 4.0 * G::integrate(outer, 0.0, 1.0);
}

}  // namespace

TEST_SUITE_BEGIN("gagliardo");

TEST_CASE("indicator of [0,1] with alpha = 1/2, p = 1 gives 16") {
  const auto f = make_grid_function({4}, {1, 1, 1, 1}, {0.25});
  CHECK(gagliardo_seminorm(f, 0.5, 1.0) == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("1-D step functions against the closed form") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto f = test::random_grid({9}, seed);
    for (double alpha : {0.3, 0.7})
      for (double p : {1.0, 1.3}) {
        if (alpha * p >= 1.0) continue;
        CHECK(gagliardo_seminorm(f, alpha, p) == doctest::Approx(gagliardo_1d(f, alpha, p)).epsilon(1e-10));
      }
  }
}

TEST_CASE("unit square against polar quadrature") {
  const auto f = make_grid_function({4, 4}, std::vector<double>(16, 1.0), {0.25, 0.25});
  for (double alpha : {0.3, 0.5}) CHECK(gagliardo_seminorm(f, alpha, 1.0) == doctest::Approx(square_polar(alpha)).epsilon(1e-6));
}

TEST_CASE("scale covariance") {
  // f(x / lambda) has the integral scaled by lambda^{n - alpha p}.
  const double lambda = 3.0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto f = test::random_grid({5, 4}, seed, {0.2, 0.25});
    const auto g = make_grid_function({5, 4}, std::vector<double>(f.values().begin(), f.values().end()),
                                      {0.2 * lambda, 0.25 * lambda});
    for (double alpha : {0.4, 0.6})
      CHECK(gagliardo_seminorm(g, alpha, 1.0) ==
            doctest::Approx(std::pow(lambda, 2.0 - alpha) * gagliardo_seminorm(f, alpha, 1.0)).epsilon(1e-9));
  }
}

TEST_CASE("midpoint reference is within its known crudeness") {
  const auto f = test::random_grid({6, 6}, 7);
  const double exact = gagliardo_seminorm(f, 0.5, 1.0);
  const double mid = gagliardo_midpoint_reference(f, 0.5, 1.0);
  CHECK(mid == doctest::Approx(exact).epsilon(0.3));
}

TEST_CASE("preconditions") {
  const auto f = make_grid_function({4}, {1, 1, 1, 1}, {0.25});
  CHECK_THROWS_AS(gagliardo_seminorm(f, 0.5, 2.0), ParameterError);
  CHECK_THROWS_AS(gagliardo_seminorm(f.with_domains({AxisDomain::half_line}), 0.5, 1.0), ParameterError);
  const auto big = make_grid_function({101, 100}, std::vector<double>(10100, 1.0), {0.01, 0.01});
  CHECK_THROWS_AS(gagliardo_seminorm(big, 0.5, 1.0), ResourceError);
}

TEST_SUITE_END();
