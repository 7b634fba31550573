#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "agf/error.hpp"
#include "agf/norms.hpp"
#include "agf/rearrange.hpp"
#include "test_util.hpp"

using namespace agf;

namespace {

/// sup over cell-aligned E with |E| = k v of min_E f, by enumerating subsets.
double sup_inf(const GridFunction& f, std::size_t k) {
  const std::size_t m = f.cell_count();
  if (k > m) return 0.0;
  double best = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) != k) continue;
    double lo = INFINITY;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1u) lo = std::min(lo, f[i]);
    best = std::max(best, lo);
  }
  return best;
}

}  // namespace

TEST_SUITE_BEGIN("rearrange");

TEST_CASE("permutations") {
  CHECK(Permutation::all(3).size() == 6);
  CHECK(Permutation::all(3).front().str() == "0-1-2");
  CHECK(Permutation::all(3).back().str() == "2-1-0");
  CHECK(Permutation::identity(2).str() == "0-1");
  CHECK_THROWS(Permutation(std::vector<std::size_t>{0, 0}));
  CHECK_THROWS(Permutation(std::vector<std::size_t>{0, 2}));
}

TEST_CASE("distribution and rearrangement of a small grid") {
  const auto f = make_grid_function({2, 2}, {3, 0, 1, 3}, {0.5, 0.5});
  CHECK(distribution(f, 0.0) == doctest::Approx(0.75));
  CHECK(distribution(f, 1.0) == doctest::Approx(0.5));
  CHECK(distribution(f, 3.0) == 0.0);
  const auto fs = decreasing_rearrangement(f);
  REQUIRE(fs.size() == 2);
  CHECK(fs.breakpoints()[0] == doctest::Approx(0.5));
  CHECK(fs.breakpoints()[1] == doctest::Approx(0.75));
  CHECK(fs.values()[0] == 3.0);
  CHECK(fs.values()[1] == 1.0);
  CHECK(fs(0.5) == 3.0);   // left continuous
  CHECK(fs(0.51) == 1.0);
  CHECK(fs(0.8) == 0.0);
}

TEST_CASE("sup-inf definition on every small shape") {
  const std::vector<std::vector<std::size_t>> shapes{{1}, {2}, {5}, {9}, {2, 2}, {2, 3}, {3, 3}, {2, 2, 2}};
  for (const auto& shape : shapes)
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto f = test::random_grid(shape, seed);
      const auto fs = decreasing_rearrangement(f);
      const double v = f.cell_volume();
      for (std::size_t k = 1; k <= f.cell_count() + 1; ++k) {
        const double want = sup_inf(f, k);
        CHECK(fs(static_cast<double>(k) * v) == want);
        CHECK(fs((static_cast<double>(k) - 0.5) * v) == want);
      }
    }
}

TEST_CASE("equimeasurability and norm preservation") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = test::random_grid({6, 5, 4}, seed, {0.3, 0.2, 0.7});
    const auto fs = decreasing_rearrangement(f);
    std::set<double> levels(f.values().begin(), f.values().end());
    for (double y : levels) CHECK(fs.measure_above(y) == distribution(f, y));
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const double a = lp_norm(f, p);
      CHECK(std::pow(fs.power_integral(1.0, p, 0.0, kInf), 1.0 / p) == doctest::Approx(a).epsilon(1e-12));
      for (const auto& s : Permutation::all(3))
        CHECK(lp_norm(iterated_rearrangement(f, s), p) == doctest::Approx(a).epsilon(1e-12));
    }
  }
}

TEST_CASE("axis and iterated rearrangements") {
  const auto f = make_grid_function({2, 3}, {1, 0, 2, 0, 3, 0}, {1.0, 1.0}, {-4.0, 2.0});
  const auto r1 = axis_rearrangement(f, 1);
  CHECK(r1.domains()[1] == AxisDomain::half_line);
  CHECK(r1.domains()[0] == AxisDomain::line);
  CHECK(r1.origin()[1] == 0.0);
  CHECK(r1.origin()[0] == -4.0);
  CHECK(std::vector<double>(r1.values().begin(), r1.values().end()) == std::vector<double>{2, 1, 0, 3, 0, 0});
  const auto g = iterated_rearrangement(f, Permutation(std::vector<std::size_t>{1, 0}));
  CHECK(std::vector<double>(g.values().begin(), g.values().end()) == std::vector<double>{3, 1, 0, 2, 0, 0});
  CHECK(is_mdec(g));
  CHECK_FALSE(is_mdec(f));
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    for (const auto& s : Permutation::all(2)) CHECK(is_mdec(iterated_rearrangement(test::random_grid({5, 7}, seed), s)));
  const auto interval = f.with_domains({AxisDomain::interval, AxisDomain::interval});
  CHECK(axis_rearrangement(interval, 0).domains()[0] == AxisDomain::interval);
}

TEST_CASE("strictification keeps the lexicographic tie order") {
  const auto g = make_grid_function({2, 2}, {2, 1, 1, 0}, {1.0, 1.0});
  const auto s = strictify(g);
  CHECK(s.order == std::vector<std::size_t>{0, 1, 2});
  CHECK(s.jittered[1] > s.jittered[2]);
  CHECK(s.jittered[0] > s.jittered[1]);
  CHECK(s.jittered[3] == 0.0);
  CHECK(s.eta > 0.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto m = iterated_rearrangement(test::random_grid({6, 6}, seed), Permutation::identity(2));
    const auto st = strictify(m);
    std::set<double> distinct;
    for (std::size_t i : st.order) distinct.insert(st.jittered[i]);
    CHECK(distinct.size() == st.order.size());
    for (std::size_t r = 1; r < st.order.size(); ++r)
      CHECK(st.jittered[st.order[r - 1]] > st.jittered[st.order[r]]);
    CHECK(is_mdec(st.jittered));
    CHECK_THROWS_AS(strictify(test::random_grid({6, 6}, seed + 100)), PreconditionError);
  }
}

TEST_CASE("dyadic decrement") {
  // Indicator of [0, 1]: phi = 1 on (1/2, 1] and 0 elsewhere.
  const StepFunction ind({1.0}, {1.0});
  const auto phi = dyadic_decrement(ind);
  CHECK(phi(0.25) == 0.0);
  CHECK(phi(0.5) == 0.0);
  CHECK(phi(0.75) == 1.0);
  CHECK(phi(1.0) == 1.0);
  CHECK(phi(1.5) == 0.0);
  // Three steps, compared pointwise with g(t) - g(2t).
  const StepFunction g({1.0, 1.5, 4.0}, {5.0, 2.0, 1.0});
  const auto d = dyadic_decrement(g);
  for (double t = 0.0037; t < 5.0; t += 0.0113) CHECK(d(t) == doctest::Approx(g(t) - g(2.0 * t)));
}

TEST_SUITE_END();
