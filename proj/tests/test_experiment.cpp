#include <doctest.h>

#include <sstream>

#include "agf/corpus.hpp"
#include "agf/error.hpp"
#include "agf/experiment.hpp"
#include "agf/grid_io.hpp"
#include "agf/kernels.hpp"
#include "agf/rearrange.hpp"

using namespace agf;

namespace {

ExperimentConfig cfg(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string reports_text(const ExperimentOutput& out) {
  std::ostringstream os;
  write_reports_csv(os, out.reports);
  write_traces_csv(os, out.traces);
  os << out.gauge_csv;
  return os.str();
}

}  // namespace

TEST_SUITE_BEGIN("experiment");

TEST_CASE("config grammar") {
  const auto c = cfg("# comment\nseed = 5\ncorpus = random-mdec 4x4\ncorpus = indicator-box 8 seed=2\n"
                     "embedding.point = p=1 beta=0.5 theta=1\nembedding.point = p=2 beta=0.25 theta=inf\n"
                     "output = o\n");
  CHECK(c.seed == 5);
  REQUIRE(c.corpus.size() == 2);
  CHECK(c.corpus[0].seed == 5);
  CHECK(c.corpus[1].seed == 2);
  CHECK(c.values("embedding.point").size() == 2);
  CHECK(c.output_dir == "o");
  CHECK_THROWS_AS(cfg("corpus = random-mdec 4x4\n"), FormatError);
  CHECK_THROWS_AS(cfg("seed = 1\nseed = 2\n"), FormatError);
  CHECK_THROWS_AS(cfg("seed = 1\nfoo = 2\n"), FormatError);
  CHECK_THROWS_AS(cfg("seed = 1\nembedding.bogus = 2\n"), FormatError);
  CHECK_THROWS_AS(cfg("seed = x\n"), FormatError);
  CHECK_THROWS_AS(cfg("seed = 1\nno equals sign\n"), FormatError);
  CHECK_THROWS_AS(cfg("seed = 1\ncorpus = sierpinski 4x4\n"), FormatError);
  try {
    cfg("seed = 1\n\nfoo = 2\n");
    FAIL("expected an error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("corpus specs and determinism") {
  const auto s = parse_corpus_spec("separable-exp-staircase 8x4 seed=7");
  CHECK(s.id() == "separable-exp-staircase/8x4/s7");
  CHECK(encode_agf1(generate(s)) == encode_agf1(generate(s)));
  CHECK_THROWS_AS(parse_corpus_spec("indicator-box 4x4 refine=2"), FormatError);
  CHECK_THROWS_AS(parse_corpus_spec("indicator-box 4xq"), FormatError);
  CHECK_THROWS_AS(parse_corpus_spec("indicator-box 4x4 colour=red"), FormatError);
  CHECK_THROWS_AS(generate_corpus({s, s}), FormatError);

  const auto box = generate(parse_corpus_spec("indicator-box 4x4"));
  CHECK(box.support_measure() == doctest::Approx(1.0));
  CHECK(is_mdec(generate(parse_corpus_spec("random-mdec 6x5 seed=3"))));
  CHECK(is_mdec(generate(parse_corpus_spec("anisotropic-staircase 8x8"))));
  const auto hat = generate(parse_corpus_spec("hat-multilinear 2 refine=4"));
  CHECK(hat.shape().size() == 1);
  CHECK(hat.shape()[0] == 8);
  CHECK(hat.values()[3] == doctest::Approx(7.0 / 8));

  const auto a = generate_corpus({parse_corpus_spec("random-general 4 seed=1")});
  const auto b = generate_corpus({parse_corpus_spec("random-general 4 seed=2")});
  CHECK(corpus_hash(a) == corpus_hash(a));
  CHECK(corpus_hash(a) != corpus_hash(b));
  CHECK(corpus_hash(a).size() == 16);
}

TEST_CASE("plan validation runs before any computation") {
  const std::string base = "seed = 1\ncorpus = hat-multilinear 2x2 refine=4\n";
  CHECK_NOTHROW(validate_plan(cfg(base), experiment_names(), {}));
  CHECK_THROWS_AS(validate_plan(cfg(base + "embedding.point = p=2 beta=0.4,0.4 theta=1,2\n"), {"embedding"}, {}),
                  ParameterError);
  RunOptions explore;
  explore.explore_open_case = true;
  CHECK_NOTHROW(validate_plan(cfg(base + "embedding.point = p=2 beta=0.4,0.4 theta=1,2\n"), {"embedding"}, explore));
  CHECK_THROWS_AS(validate_plan(cfg(base + "embedding.point = p=1 beta=1.5,0.5 theta=1,1\n"), {"embedding"}, {}),
                  ParameterError);
  CHECK_THROWS_AS(validate_plan(cfg(base + "rearr-estimate.p = 0.5\n"), {"rearr-estimate"}, {}), ParameterError);
  CHECK_THROWS_AS(validate_plan(cfg(base + "appendix.iter_mu = 1\n"), {"appendix"}, {}), ParameterError);
  CHECK_THROWS_AS(validate_plan(cfg(base + "embedding.point = p=1 beta=0.5\n"), {"embedding"}, {}), FormatError);
  CHECK_THROWS_AS(validate_plan(cfg(base), {"nope"}, {}), FormatError);
  CHECK_FALSE(needs_budgets("modulus-lemmas"));
  CHECK(needs_budgets("embedding"));
}

TEST_CASE("calibration doubles the worst ratio") {
  ExperimentOutput o;
  o.reports = {make_report("main12", "f", {}, 1.0, 4.0, 1e300), make_report("main12", "g", {}, 3.0, 4.0, 1e300),
               make_report("main12", "h", {}, 0.0, 0.0, 1e300), make_report("lw", "g", {}, 1.0, 1.0, kHardBudget)};
  const auto t = calibrate({o}, "abc");
  CHECK(t.corpus_hash == "abc");
  CHECK(t.budgets.size() == 1);
  CHECK(t.budgets.at("main12") == doctest::Approx(1.5));
  ExperimentOutput bad;
  bad.reports = {make_report("main12", "f", {}, 1.0, 0.0, 1e300)};
  CHECK_THROWS_AS(calibrate({bad}, "abc"), PreconditionError);
}

TEST_CASE("results do not depend on the thread count") {
  const auto c = cfg("seed = 3\ncorpus = random-mdec 8x8 seed=1\ncorpus = hat-multilinear 2x2 refine=4\n"
                     "corpus = separable-exp-staircase 8x4\naniso-estimate.h = 1/4, 1/8\n");
  const auto corpus = generate_corpus(c.corpus);
  const int saved = kernels::max_threads();
  std::vector<std::string> runs;
  for (int threads : {1, 4}) {
    kernels::set_threads(threads);
    std::string all;
    for (const char* e : {"modulus-lemmas", "rearr-estimate", "aniso-estimate", "appendix"})
      all += reports_text(run_experiment(e, c, corpus, {}));
    runs.push_back(all);
  }
  kernels::set_threads(saved);
  CHECK(runs[0] == runs[1]);
  CHECK(runs[0].find("gauge-product") != std::string::npos);
}

TEST_SUITE_END();
