// agf: corpus generation, calibration and verification runs.
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "agf/corpus.hpp"
#include "agf/error.hpp"
#include "agf/experiment.hpp"
#include "agf/grid_io.hpp"
#include "agf/kernels.hpp"
#include "agf/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string config;
  std::string out;
  std::string budget;
  int threads = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool explore_open_case = false;
  bool force = false;
  std::string experiment;
};

void apply_threads(int threads) {
  if (threads <= 0) {
    if (const char* env = std::getenv("AGF_THREADS")) {
      try {
        threads = std::stoi(env);
      } catch (const std::exception&) {
        throw agf::FormatError(std::string("bad AGF_THREADS '") + env + "'");
      }
      if (threads <= 0) throw agf::FormatError("AGF_THREADS must be positive");
    }
  }
  if (threads > 0) agf::kernels::set_threads(threads);
}

agf::ExperimentConfig load(const Options& o) {
  if (o.config.empty()) throw agf::FormatError("--config is required");
  agf::ExperimentConfig c = agf::load_config(o.config);
  if (o.seed_given) {
    c.seed = o.seed;
    for (auto& s : c.corpus)
      if (!s.seed_given) s.seed = o.seed;
  }
  return c;
}

std::vector<std::string> selected(const std::string& experiment) {
  if (experiment == "all") return agf::experiment_names();
  for (const auto& n : agf::experiment_names())
    if (n == experiment) return {experiment};
  throw agf::FormatError("unknown experiment '" + experiment + "'");
}

std::string sanitize(std::string id) {
  for (char& ch : id)
    if (ch == '/' || ch == ',') ch = '_';
  return id;
}

int cmd_corpus(const Options& o) {
  const agf::ExperimentConfig c = load(o);
  const auto corpus = agf::generate_corpus(c.corpus);
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    std::ofstream index(fs::path(o.out) / "corpus.csv");
    index << "function_id,family,shape,cells,file\n";
    for (const auto& m : corpus) {
      const std::string file = sanitize(m.id) + ".agf1";
      agf::write_agf1((fs::path(o.out) / file).string(), m.f);
      std::ostringstream shape;
      for (std::size_t k = 0; k < m.f.dims(); ++k) shape << (k ? "x" : "") << m.f.shape()[k];
      index << agf::csv_quote(m.id) << ',' << m.spec.family << ',' << shape.str() << ',' << m.f.cell_count() << ','
            << file << '\n';
    }
  }
  for (const auto& m : corpus) std::cout << m.id << "  cells=" << m.f.cell_count() << '\n';
  std::cout << "corpus_hash " << agf::corpus_hash(corpus) << '\n';
  return 0;
}

int cmd_calibrate(const Options& o) {
  const agf::ExperimentConfig c = load(o);
  const std::string path = !o.budget.empty() ? o.budget : c.budget_path;
  if (path.empty()) throw agf::FormatError("no budget file path (use --budget or 'budget =' in the config)");
  if (fs::exists(path) && !o.force) {
    std::cerr << "agf: " << path << " exists; pass --force to overwrite\n";
    return kExitUsage;
  }
  agf::RunOptions opt;
  opt.explore_open_case = o.explore_open_case;
  agf::validate_plan(c, agf::experiment_names(), opt);
  const auto corpus = agf::generate_corpus(c.corpus);
  std::vector<agf::ExperimentOutput> outputs;
  for (const auto& name : agf::experiment_names()) {
    outputs.push_back(agf::run_experiment(name, c, corpus, opt));
    if (!o.out.empty()) agf::write_outputs(outputs.back(), (fs::path(o.out) / name).string());
  }
  const agf::BudgetTable table = agf::calibrate(outputs, agf::corpus_hash(corpus));
  table.save(path);
  std::cout << "wrote " << table.budgets.size() << " budgets to " << path << " (corpus " << table.corpus_hash
            << ")\n";
  // Hard-constant and threshold checks still carry verdicts in calibration mode.
  for (const auto& out : outputs)
    if (agf::any_failed(out.reports)) {
      std::cerr << "agf: " << out.name << " has failing fixed-constant checks\n";
      return kExitFail;
    }
  return 0;
}

int cmd_run(const Options& o) {
  const agf::ExperimentConfig c = load(o);
  const auto names = selected(o.experiment);
  agf::RunOptions opt;
  opt.explore_open_case = o.explore_open_case;
  agf::validate_plan(c, names, opt);
  const auto corpus = agf::generate_corpus(c.corpus);

  agf::BudgetTable table;
  bool need = false;
  for (const auto& n : names) need = need || agf::needs_budgets(n);
  if (need) {
    const std::string path = !o.budget.empty() ? o.budget : c.budget_path;
    if (path.empty()) throw agf::FormatError("budget file required (use --budget or 'budget =' in the config)");
    table = agf::BudgetTable::load(path);
    const std::string hash = agf::corpus_hash(corpus);
    if (table.corpus_hash != hash)
      throw agf::FormatError("corpus hash mismatch: budget file has " + table.corpus_hash + ", corpus is " + hash +
                             "; recalibrate");
    opt.budgets = &table;
  }

  const std::string out = !o.out.empty() ? o.out : (!c.output_dir.empty() ? c.output_dir : "out");
  std::vector<agf::InequalityReport> all;
  for (const auto& name : names) {
    const agf::ExperimentOutput result = agf::run_experiment(name, c, corpus, opt);
    agf::write_outputs(result, (fs::path(out) / name).string());
    all.insert(all.end(), result.reports.begin(), result.reports.end());
  }
  const std::string table_text = agf::summary_table(all);
  if (names.size() > 1) {
    std::ofstream s(fs::path(out) / "summary.txt");
    s << table_text;
  }
  std::cout << table_text;
  return agf::any_failed(all) ? kExitFail : 0;
}

int cmd_report(const Options& o) {
  const std::string dir = !o.out.empty() ? o.out : "out";
  if (!fs::is_directory(dir)) throw agf::FormatError("no output directory " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().filename() == "reports.csv") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw agf::FormatError("no reports.csv under " + dir);
  std::vector<agf::InequalityReport> all;
  for (const auto& f : files) {
    std::ifstream is(f);
    auto reps = agf::read_reports_csv(is);
    all.insert(all.end(), reps.begin(), reps.end());
  }
  std::cout << agf::summary_table(all);
  return agf::any_failed(all) ? kExitFail : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"agf: rearrangement, Lorentz and Besov checks on grid functions"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "experiment config file");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--threads", o.threads, "worker threads (default: AGF_THREADS, then OpenMP)");
    sub->add_option("--seed", o.seed, "default corpus seed, overrides the config")
        ->each([&](const std::string&) { o.seed_given = true; });
  };
  auto* corpus = app.add_subcommand("corpus", "generate the corpus; with --out, write AGF1 files and an index");
  common(corpus);
  auto* calibrate = app.add_subcommand("calibrate", "run every experiment and freeze budgets");
  common(calibrate);
  calibrate->add_option("--budget", o.budget, "budget file to write");
  calibrate->add_flag("--force", o.force, "overwrite an existing budget file");
  calibrate->add_flag("--explore-open-case", o.explore_open_case, "log points with theta_j < p");
  auto* run = app.add_subcommand("run", "run one experiment or all");
  common(run);
  run->add_option("experiment", o.experiment, "experiment name or 'all'")->required();
  run->add_option("--budget", o.budget, "calibrated budget file");
  run->add_flag("--explore-open-case", o.explore_open_case, "log points with theta_j < p");
  auto* report = app.add_subcommand("report", "summarize reports.csv files under --out");
  report->add_option("--out", o.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    apply_threads(o.threads);
    if (*corpus) return cmd_corpus(o);
    if (*calibrate) return cmd_calibrate(o);
    if (*run) return cmd_run(o);
    return cmd_report(o);
  } catch (const agf::Error& e) {
    std::cerr << "agf: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "agf: " << e.what() << '\n';
    return kExitUsage;
  }
}
