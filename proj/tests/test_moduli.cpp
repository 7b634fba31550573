#include <doctest.h>

#include <cmath>

#include "agf/corpus.hpp"
#include "agf/error.hpp"
#include "agf/moduli.hpp"
#include "test_util.hpp"

using namespace agf;

namespace {

GridFunction unit_indicator(std::size_t cells) {
  return make_grid_function({cells}, std::vector<double>(cells, 1.0), {1.0 / static_cast<double>(cells)});
}

GridFunction hat2d() {
  CorpusSpec s;
  s.family = "hat-multilinear";
  s.shape = {4, 4};
  s.refine = 4;
  return generate(s);
}

}  // namespace

TEST_SUITE_BEGIN("moduli");

TEST_CASE("indicator of [0,1]: I(h) = 2 min(h, 1) for p = 1") {
  const auto f = unit_indicator(8);
  const ShiftProfile s1(f, 0, 1.0);
  for (double h : {0.0, 0.05, 0.125, 0.3, 0.5, 0.99, 1.0, 1.7, 5.0}) {
    CHECK(s1.norm(h) == doctest::Approx(2.0 * std::min(h, 1.0)));
    CHECK(s1.modulus(h) == doctest::Approx(2.0 * std::min(h, 1.0)));
    CHECK(shift_difference_norm(f, 0, h, 1.0) == doctest::Approx(2.0 * std::min(h, 1.0)));
  }
  const ShiftProfile s2(f, 0, 2.0);
  for (double h : {0.05, 0.3, 2.0}) CHECK(s2.norm(h) == doctest::Approx(std::sqrt(2.0 * std::min(h, 1.0))));
  // int_0^delta 2h dh = delta^2 for delta <= 1, then 1 + 2(delta - 1).
  CHECK(s1.integral_of_norm(0.6) == doctest::Approx(0.36));
  CHECK(s1.integral_of_norm(1.5) == doctest::Approx(2.0));
}

TEST_CASE("lattice interpolation identity at off-lattice shifts") {
  const auto f = test::random_grid({11}, 4);
  const double c = f.cell_sizes()[0];
  for (double p : {1.0, 2.5}) {
    const ShiftProfile s(f, 0, p);
    for (int m = 0; m < 10; ++m)
      for (double frac : {0.25, 0.6}) {
        const double h = (m + frac) * c;
        // Direct evaluation: integrate |f(x + h) - f(x)|^p over x on a fine partition
        // aligned with both the grid and its shift, where the integrand is constant.
        std::vector<double> pts;
        for (int i = -12; i <= 12; ++i) {
          pts.push_back(i * c);
          pts.push_back(i * c - h);
        }
        std::sort(pts.begin(), pts.end());
        auto val = [&](double x) {
          const double u = std::floor(x / c);
          if (u < 0 || u >= 11) return 0.0;
          return f[static_cast<std::size_t>(u)];
        };
        double direct = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
          const double mid = 0.5 * (pts[i] + pts[i + 1]);
          direct += (pts[i + 1] - pts[i]) * std::pow(std::fabs(val(mid + h) - val(mid)), p);
        }
        CHECK(s.power(h) == doctest::Approx(direct).epsilon(1e-12));
      }
  }
}

TEST_CASE("integral of the norm against a dense midpoint sum") {
  const auto f = test::random_grid({6, 5}, 9);
  for (std::size_t axis = 0; axis < 2; ++axis) {
    const ShiftProfile s(f, axis, 1.5);
    const double delta = 0.77;
    const int steps = 200000;
    double sum = 0.0;
    for (int i = 0; i < steps; ++i) sum += s.norm((i + 0.5) * delta / steps);
    CHECK(s.integral_of_norm(delta) == doctest::Approx(sum * delta / steps).epsilon(1e-7));
  }
}

TEST_CASE("modulus curve matches the running maximum and satisfies the axioms") {
  const auto f = test::random_grid({16}, 12);
  const ShiftProfile s(f, 0, 2.0);
  const ModulusCurve w = s.curve();
  for (int i = 0; i <= 400; ++i) {
    const double d = i * 0.005;
    double mx = 0.0;
    for (int j = 0; j <= i; ++j) mx = std::max(mx, s.norm(j * 0.005));
    CHECK(w(d) >= mx - 1e-12);
    CHECK(w(d) == doctest::Approx(s.modulus(d)));
  }
  const auto rep = modulus_axioms_check(w, f.cell_sizes()[0], 6);
  CHECK(rep.passes("monotone"));
  CHECK(rep.passes("zero"));
  CHECK(rep.passes("d1-subadditive"));
  CHECK(rep.passes("d2-doubling"));
  CHECK(rep.passes("d3-quasi-monotone"));

  const auto ind = modulus_axioms_check(modulus_curve(unit_indicator(16), 0, 1.0), 1.0 / 16, 5);
  CHECK(ind.all_pass());
  const auto hat = hat2d();
  for (std::size_t k = 0; k < 2; ++k) CHECK(modulus_axioms_check(modulus_curve(hat, k, 1.0), hat.cell_sizes()[k], 4).all_pass());
}

TEST_CASE("ModulusCurve validation") {
  CHECK_THROWS_AS(ModulusCurve(1.0, {0.1, 0.2}, {0.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(ModulusCurve(1.0, {0.0, 0.2}, {0.0, -1.0}), ValidationError);
  const ModulusCurve w(2.0, {0.0, 1.0}, {0.0, 2.0});
  // omega^2 is linear: omega(1/4) = sqrt(4 / 4) = 1.
  CHECK(w(0.25) == doctest::Approx(1.0));
  CHECK(w(3.0) == doctest::Approx(2.0));
}

TEST_CASE("Steklov mean pointwise against direct averaging") {
  const auto f = test::random_grid({8, 3}, 21);
  const double c = f.cell_sizes()[0];
  const SteklovMean m(f, 3 * c, 0);
  CHECK(m.window_cells() == 3);
  for (double x0 : {-0.3, -0.01, 0.0, 0.11, 0.5, 0.93}) {
    for (double x1 : {0.1, 0.5, 0.9}) {
      const std::vector<double> x{x0, x1};
      const int steps = 30000;
      double s = 0.0;
      for (int i = 0; i < steps; ++i) {
        const double y = x0 + (i + 0.5) * 3 * c / steps;
        const double u = std::floor(y / c);
        const double v = std::floor(x1 / f.cell_sizes()[1]);
        if (u >= 0 && u < 8) s += f.at(std::vector<std::size_t>{static_cast<std::size_t>(u), static_cast<std::size_t>(v)});
      }
      CHECK(m.value_at(x) == doctest::Approx(s / steps).epsilon(1e-4));
    }
  }
  CHECK_THROWS_AS(SteklovMean(f, 0.3 * c, 0), ParameterError);
  CHECK_THROWS_AS(SteklovMean(f.with_domains({AxisDomain::interval, AxisDomain::line}), c, 0), ParameterError);
}

TEST_CASE("Steklov inequalities with constant 1 and an independent distance") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto f = test::random_grid({12, 6}, seed);
    for (std::size_t axis = 0; axis < 2; ++axis)
      for (std::size_t m : {1u, 2u, 4u}) {
        const double h = static_cast<double>(m) * f.cell_sizes()[axis];
        const SteklovMean mean(f, h, axis);
        for (double p : {1.0, 2.0}) {
          const double w = partial_modulus(f, axis, h, p);
          const double dist = mean.lp_distance(p);
          CHECK(dist <= w * (1.0 + 1e-12));
          const auto deriv = steklov_axis_derivative(f, h, axis);
          CHECK(lp_norm(deriv, p) <= w / h * (1.0 + 1e-12));
          // The derivative of the mean is |f(x + h) - f(x)| / h, whose L^p norm is I(h)/h.
          CHECK(lp_norm(deriv, p) == doctest::Approx(shift_difference_norm(f, axis, h, p) / h));
        }
      }
  }
  // Distance by sampling for one case.
  const auto f = test::random_grid({10}, 33);
  const double c = f.cell_sizes()[0];
  const SteklovMean mean(f, 2 * c, 0);
  const int steps = 400000;
  double s = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double x = -2 * c + (i + 0.5) * (1.0 + 2 * c) / steps;
    const double u = std::floor(x / c);
    const double fx = (u >= 0 && u < 10) ? f[static_cast<std::size_t>(u)] : 0.0;
    s += std::fabs(fx - mean.value_at(std::vector<double>{x}));
  }
  CHECK(mean.lp_distance(1.0) == doctest::Approx(s * (1.0 + 2 * c) / steps).epsilon(1e-5));
}

TEST_SUITE_END();
