#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "agf/corpus.hpp"
#include "agf/error.hpp"
#include "agf/verify.hpp"
#include "test_util.hpp"

using namespace agf;

namespace {

GridFunction hat(std::vector<std::size_t> shape, std::size_t refine, std::uint64_t seed = 0) {
  CorpusSpec s;
  s.family = "hat-multilinear";
  s.shape = std::move(shape);
  s.refine = refine;
  s.seed = seed;
  return generate(s);
}

std::size_t count(const std::vector<InequalityReport>& rs, const std::string& id, Verdict v) {
  return static_cast<std::size_t>(
      std::count_if(rs.begin(), rs.end(), [&](const auto& r) { return r.id == id && r.verdict == v; }));
}

bool none_failed(const std::vector<InequalityReport>& rs) { return !any_failed(rs); }

}  // namespace

TEST_SUITE_BEGIN("verify");

TEST_CASE("constant tiers") {
  for (const char* id : {"o-w2", "moduli", "int", "steklov1", "steklov2", "oper", "monotone", "iter", "lw"})
    CHECK(is_hard_constant(id));
  CHECK_FALSE(is_hard_constant("main12"));
  CHECK(is_threshold_check("k-l-gap"));
  CHECK(is_threshold_check("bbm-gap"));
  VerifyContext calib;
  CHECK(std::isinf(calib.budget("main12")));
  BudgetTable t;
  t.budgets["main12"] = 3.0;
  VerifyContext ctx{&t};
  CHECK(ctx.budget("main12") == 3.0);
  CHECK_THROWS_AS(ctx.budget("main1000"), FormatError);
}

TEST_CASE("isotropic estimate left side by hand") {
  // f* = 1 on (0, 1]: only t > 1 contributes, int_1^inf t^{-2} dt = 1.
  CHECK(isotropic_estimate_lhs(StepFunction({1.0}, {1.0}), 1.0, 1, 0.25) == doctest::Approx(1.0));
  // f* = 2 on (0,1], 1 on (1,2]: 1 * int_1^2 t^{-2} + 3 * int_2^inf t^{-2} = 1/2 + 3/2.
  CHECK(isotropic_estimate_lhs(StepFunction({1.0, 2.0}, {2.0, 1.0}), 1.0, 1, 0.5) == doctest::Approx(2.0));
  // Lower limit delta^n above the first breakpoint cuts the first piece.
  CHECK(isotropic_estimate_lhs(StepFunction({1.0, 2.0}, {2.0, 1.0}), 1.0, 1, 1.5) ==
        doctest::Approx(1.0 * (1.0 / 1.5 - 0.5) + 1.5));
  const auto f = make_grid_function({4}, {1, 1, 1, 1}, {0.25});
  BudgetTable t;
  t.budgets["estim6"] = 10.0;
  const auto r = verify_isotropic_estimate(f, "ind", 1.0, 0.25, VerifyContext{&t});
  CHECK(r.lhs == doctest::Approx(1.0));
  CHECK(r.rhs == doctest::Approx(2.0));  // omega(1/4)/(1/4) with omega = 2 delta
  CHECK(r.verdict == Verdict::pass);
}

TEST_CASE("hard-constant lemmas hold on random grids") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto f1 = test::random_grid({16}, seed);
    const auto f2 = test::random_grid({8, 8}, seed + 10);
    const std::vector<double> deltas{1.0 / 16, 1.0 / 8, 0.25, 0.5};
    for (double p : {1.0, 2.0}) {
      const auto a = verify_modulus_lemmas(f2, "f2", p, deltas);
      CHECK(none_failed(a));
      CHECK(count(a, "int", Verdict::pass) == 8);
      // delta = 1/16 is below the cell size 1/8, so no Steklov check there.
      CHECK(count(a, "steklov1", Verdict::pass) == 6);
      const auto b = verify_rearrangement_modulus(f1, "f1", p, deltas, Permutation::all(1));
      CHECK(none_failed(b));
      CHECK(count(b, "o-w2", Verdict::pass) + count(b, "o-w2", Verdict::degenerate) == 4);
      const auto c = verify_rearrangement_modulus(f2, "f2", p, deltas, Permutation::all(2));
      CHECK(none_failed(c));
      CHECK(count(c, "o-w2", Verdict::pass) == 0);
      CHECK(count(c, "moduli", Verdict::pass) == 2 * 2 * 4);
    }
  }
}

TEST_CASE("embedding: admissibility, open case and the Minkowski step") {
  const auto f = hat({4, 4}, 4);
  VerifyContext calib;
  const auto bp = derive_params(1.0, {0.5, 0.5}, {1.0, 1.0});
  const auto rs = verify_embedding(f, "hat", bp, NormFlavor::lorentz, Permutation::identity(2), calib);
  REQUIRE(rs.size() == 2);
  CHECK(rs[0].id == "main12");
  CHECK(rs[1].id == "minkowski");
  CHECK(rs[1].verdict == Verdict::pass);
  const auto mixed = verify_embedding(f, "hat", bp, NormFlavor::mixed, Permutation::identity(2), calib);
  CHECK(mixed.size() == 1);
  CHECK(mixed[0].id == "main1000");
  const auto open = derive_params(2.0, {0.4, 0.4}, {1.0, 2.0});
  CHECK_THROWS_AS(verify_embedding(f, "hat", open, NormFlavor::lorentz, Permutation::identity(2), calib),
                  ParameterError);
  VerifyContext explore;
  explore.explore_open_case = true;
  const auto logged = verify_embedding(f, "hat", open, NormFlavor::lorentz, Permutation::identity(2), explore);
  CHECK(logged[0].verdict == Verdict::logged);
  CHECK_THROWS_AS(verify_embedding(f, "hat", derive_params(3.0, {0.9, 0.9}, {3.0, 3.0}), NormFlavor::lorentz,
                                   Permutation::identity(2), calib),
                  ParameterError);
  // Sides without the factors are never smaller.
  const auto s = embedding_sides(f, bp, NormFlavor::lorentz, Permutation::identity(2));
  CHECK(s.rhs_without >= s.rhs);
  CHECK(s.seminorms.size() == 2);
}

TEST_CASE("limiting sweep on a bump") {
  const auto f = hat({4, 4}, 8);
  const auto res = limiting_sweep(f, "hat", derive_params(1.0, {0.5, 0.5}, {2.0, 2.0}), {0, 1}, 8, VerifyContext{});
  CHECK(res.trace.series("with-factors").size() == 8);
  CHECK(res.trace.series("without-factors").size() == 8);
  CHECK(count(res.reports, "limit-sweep-stability", Verdict::pass) == 1);
  CHECK(count(res.reports, "limit-sweep-control", Verdict::pass) == 1);
  CHECK(count(res.reports, "lipschitz-corollary", Verdict::pass) == 1);
}

TEST_CASE("limit relations and the BBM variant") {
  const auto f = hat({16}, 16);
  for (double theta : {1.0, 2.0}) {
    const auto l = verify_limit_relations(f, "hat", 0, 1.0, theta, 8);
    CHECK(l.gap_report.verdict == Verdict::pass);
    CHECK(l.trace.points.size() == 8);
  }
  const auto b = verify_bbm(hat({4}, 16), "hat64", 1.0, 6);
  CHECK(b.gap_report.verdict == Verdict::pass);
  CHECK_THROWS_AS(verify_bbm(hat({2, 2}, 4), "h", 1.0, 6), ParameterError);
}

TEST_CASE("Bourgain-type inequality and Lorentz relations") {
  const auto f = hat({4}, 8);
  const auto rs = verify_bourgain(f, "hat", 1.0, 0.5, VerifyContext{});
  CHECK(rs.size() == 2);
  CHECK(none_failed(rs));
  CHECK_THROWS_AS(verify_bourgain(f, "hat", 1.0, 0.3, VerifyContext{}), ParameterError);
  const auto g = test::random_grid({6, 5}, 4);
  const auto lr = verify_lorentz_relations(g, "g", 2.0, {1.0, 2.0, 4.0}, Permutation::all(2), VerifyContext{});
  CHECK(none_failed(lr));
  CHECK(count(lr, "yats1", Verdict::pass) > 0);
  CHECK(count(lr, "yats2", Verdict::pass) > 0);
}

TEST_CASE("appendix operators") {
  const auto f = iterated_rearrangement(test::random_grid({6, 5}, 3), Permutation::identity(2))
                     .with_domains({AxisDomain::line, AxisDomain::line});
  const auto ops = verify_box_operator(f, "m", {1.0, 2.0}, {-0.5, 0.0, 1.0});
  CHECK(none_failed(ops));
  CHECK(count(ops, "oper", Verdict::pass) == 6);
  CHECK(count(ops, "monotone", Verdict::pass) == 1);
  const auto it = verify_iter(f, "m", 1.0, {0.125, 0.25}, {2.0, 4.0});
  CHECK(none_failed(it));
  CHECK(it.size() == 2 * 2 * 2);
  CHECK_THROWS_AS(verify_iter(test::random_grid({6, 5}, 3), "r", 1.0, {0.25}, {2.0}), PreconditionError);
  CHECK_THROWS_AS(verify_iter(f, "m", 1.0, {0.25}, {1.0}), ParameterError);
}

TEST_SUITE_END();
