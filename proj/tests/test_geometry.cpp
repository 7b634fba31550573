#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "agf/corpus.hpp"
#include "agf/error.hpp"
#include "agf/geometry.hpp"
#include "test_util.hpp"

using namespace agf;

namespace {

CellSet random_mask(std::vector<std::size_t> shape, std::uint64_t seed, double density) {
  std::mt19937_64 rng(seed);
  std::size_t total = 1;
  for (auto e : shape) total *= e;
  std::vector<bool> mask(total);
  for (std::size_t i = 0; i < total; ++i) mask[i] = unit_uniform(rng()) < density;
  std::vector<double> cells(shape.size(), 1.0);
  return CellSet::from_mask(std::move(shape), std::move(cells), mask);
}

/// Fewest whole columns along `axis` whose cells reach `target`, by subset enumeration.
std::size_t exhaustive_columns(const CellSet& e, std::size_t axis, double target) {
  const auto prof = projection_profile(e, axis);
  const std::size_t m = prof.columns.size();
  std::size_t best = m;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    double meas = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1u) meas += prof.columns[i].section * prof.face_volume;
    if (meas >= target - 1e-12) best = std::min<std::size_t>(best, __builtin_popcountll(mask));
  }
  return best;
}

}  // namespace

TEST_SUITE_BEGIN("geometry");

TEST_CASE("cell sets and projection profiles") {
  const auto e = CellSet::from_mask({2, 3}, {0.5, 1.0}, {true, false, true, false, false, true});
  CHECK(e.count() == 3);
  CHECK(e.measure() == doctest::Approx(1.5));
  CHECK(e.contains(2));
  CHECK_FALSE(e.contains(1));
  const auto p0 = projection_profile(e, 0);
  CHECK(p0.columns.size() == 2);  // keys 0 and 2
  CHECK(p0.face_volume == 1.0);
  CHECK(p0.projection_measure() == doctest::Approx(2.0));
  const auto p1 = projection_profile(e, 1);
  CHECK(p1.columns.size() == 2);
  CHECK(p1.columns[0].section == doctest::Approx(2.0));
  CHECK(p1.total_measure() == doctest::Approx(1.5));
  const CellSet frac({2, 2}, {1.0, 1.0}, {0}, 3, 0.25);
  CHECK(frac.measure() == doctest::Approx(1.25));
  CHECK_THROWS_AS(loomis_whitney_check(frac), PreconditionError);
}

TEST_CASE("Loomis-Whitney on boxes is an equality, on random masks an inequality") {
  const auto box = CellSet::from_mask({3, 4, 2}, {1, 1, 1}, std::vector<bool>(24, true));
  const auto r = loomis_whitney_check(box);
  CHECK(r.lhs == doctest::Approx(24.0 * 24.0));
  CHECK(r.rhs == doctest::Approx(8.0 * 6.0 * 12.0));
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto e = random_mask({1 + seed % 7, 2 + seed % 5, 1 + seed % 4}, seed, 0.1 + 0.008 * seed);
    CHECK(loomis_whitney_check(e).verdict != Verdict::fail);
  }
}

TEST_CASE("2x2 block: one column reaches half the measure") {
  const auto e = CellSet::from_mask({2, 2}, {1.0, 1.0}, {true, true, true, true});
  CHECK(projection_profile(e, 1).projection_measure() == doctest::Approx(2.0));
  const auto s = select_columns(e, 1, 2.0);
  CHECK(s.measure() == doctest::Approx(2.0));
  CHECK(projection_profile(s, 1).projection_measure() == doctest::Approx(1.0));
  CHECK(s.cells()[0] == 0);  // ties go to the smallest key
}

TEST_CASE("greedy selection is the whole-column minimum on small instances") {
  for (std::size_t a = 1; a <= 4; ++a)
    for (std::size_t b = 1; b <= 4; ++b)
      for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto e = random_mask({a, b}, 100 * a + 10 * b + seed, 0.6);
        if (e.empty()) continue;
        for (std::size_t axis = 0; axis < 2; ++axis) {
          const double target = 0.5 * e.measure();
          const auto s = select_columns(e, axis, target);
          CHECK(s.measure() >= target - 1e-12);
          CHECK(projection_profile(s, axis).columns.size() == exhaustive_columns(e, axis, target));
        }
      }
}

TEST_CASE("projection chain targets and inclusions") {
  const auto e = random_mask({6, 5, 4}, 77, 0.5);
  const auto ch = minimal_projection_chain(e);
  REQUIRE(ch.sets.size() == 4);
  for (std::size_t j = 1; j <= 3; ++j) {
    CHECK(ch.targets[j] == doctest::Approx(std::ldexp(e.measure(), -static_cast<int>(j))));
    CHECK(ch.sets[j].measure() >= ch.targets[j] - 1e-12);
    for (std::size_t c : ch.sets[j].cells()) CHECK(ch.sets[j - 1].contains(c));
    CHECK(ch.projection_measures[j - 1] == doctest::Approx(projection_profile(ch.sets[j], j - 1).projection_measure()));
  }
}

TEST_CASE("superlevel filling follows the strict order") {
  const auto g = make_grid_function({2, 2}, {3, 2, 2, 1}, {0.5, 0.5});
  const auto s = strictify(g);
  const auto e = superlevel_filling(s, 0.5);
  CHECK(e.count() == 2);
  CHECK(e.contains(0));
  CHECK(e.contains(1));
  CHECK_THROWS_AS(superlevel_filling(s, 0.3), ParameterError);
  CHECK_THROWS_AS(superlevel_filling(s, 1.25), ParameterError);
}

TEST_CASE("gauge: product bound, u piecewise constant, Loomis-Whitney on every set") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto f = test::random_grid({8, 6}, seed);
    for (const auto& sigma : Permutation::all(2))
      for (TGrid grid : {TGrid::even_lattice, TGrid::dyadic}) {
        const auto gauge = build_gauge(f, sigma, grid, true);
        CHECK(gauge.product_bound_holds());
        for (const auto& p : gauge.points) {
          if (p.degenerate) continue;
          CHECK(p.lw_holds);
          double prod = 1.0;
          for (std::size_t j = 0; j < 2; ++j) {
            CHECK(p.u[j] == doctest::Approx(p.t / p.mu[j]));
            CHECK(p.chain.sets.size() == 3);
            prod *= p.u[j];
          }
          CHECK(prod <= p.t * (1 + 1e-12));
        }
        if (gauge.points.size() >= 2) {
          const auto& a = gauge.points[0];
          const auto& b = gauge.points[1];
          const double mid = 0.5 * (a.t + b.t);
          if (!b.degenerate) CHECK(gauge.u(0, mid) == b.u[0]);
          CHECK(gauge.locate(b.t) == 1);
        }
        CHECK(gauge.u(0, gauge.support_measure * 10.0) == 0.0);
      }
  }
  const auto single = make_grid_function({3}, {0, 1, 0}, {1.0});
  const auto g1 = build_gauge(single, Permutation::identity(1));
  REQUIRE(g1.points.size() == 1);
  CHECK(g1.points[0].degenerate);
}

TEST_CASE("box average against sampling") {
  const auto phi = test::random_grid({5, 4}, 3, {0.3, 0.25});
  for (double x0 : {0.05, 0.4, 1.1, 2.0})
    for (double x1 : {0.1, 0.6, 1.3}) {
      const int s = 600;
      double sum = 0.0;
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
          const double y0 = x0 / 2 + (i + 0.5) * (x0 / 2) / s, y1 = x1 / 2 + (j + 0.5) * (x1 / 2) / s;
          const double u0 = std::floor(y0 / 0.3), u1 = std::floor(y1 / 0.25);
          if (u0 < 5 && u1 < 4) sum += phi.at(std::vector<std::size_t>{std::size_t(u0), std::size_t(u1)});
        }
      CHECK(box_average(phi, std::vector<double>{x0, x1}) == doctest::Approx(sum / (s * s)).epsilon(2e-2));
    }
  // Exact where the box sits inside one cell.
  CHECK(box_average(phi, std::vector<double>{0.2, 0.2}) == doctest::Approx(phi[0]));
}

TEST_CASE("operator integrals against graded quadrature in 1-D") {
  const auto phi = test::random_grid({6}, 8, {0.25});
  const double L = 1.5;
  for (double r : {1.0, 2.0})
    for (double a : {-0.5, 0.0, 1.0}) {
      const auto I = box_operator_integrals(phi, r, a);
      // x = 2L u^4 grades towards the origin where x^a may blow up.
      const int steps = 400000;
      double lhs = 0.0;
      for (int i = 0; i < steps; ++i) {
        const double u = (i + 0.5) / steps;
        const double x = 2 * L * std::pow(u, 4), dx = 8 * L * std::pow(u, 3) / steps;
        lhs += std::pow(box_average(phi, std::vector<double>{x}), r) * std::pow(x, a) * dx;
      }
      double rhs = 0.0;
      for (std::size_t i = 0; i < 6; ++i)
        rhs += std::pow(phi[i], r) * (std::pow(0.25 * (i + 1), a + 1) - std::pow(0.25 * i, a + 1)) / (a + 1);
      CHECK(I.lhs == doctest::Approx(lhs).epsilon(1e-5));
      CHECK(I.rhs == doctest::Approx(rhs).epsilon(1e-12));
      CHECK(I.lhs <= std::ldexp(1.0, static_cast<int>(std::max(1.0, a))) * I.rhs * (1.0 + 1e-12));
    }
  CHECK_THROWS_AS(box_operator_integrals(phi, 0.5, 0.0), ParameterError);
  CHECK_THROWS_AS(box_operator_integrals(phi, 1.0, -1.0), ParameterError);
}

TEST_SUITE_END();
