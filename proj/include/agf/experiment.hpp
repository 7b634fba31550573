#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "agf/corpus.hpp"
#include "agf/report.hpp"

namespace agf {

/// Flat key=value configuration. Keys repeat to form lists; experiment
/// parameters are prefixed with the experiment name ("embedding.point = ...").
/// See the README for the grammar.
struct ExperimentConfig {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::vector<CorpusSpec> corpus;
  std::string output_dir;
  std::string budget_path;
  /// Experiment keys in file order, values trimmed.
  std::vector<std::pair<std::string, std::string>> entries;

  std::vector<std::string> values(const std::string& key) const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Experiment names in run order, without "all".
const std::vector<std::string>& experiment_names();
/// Whether the experiment has budget-tier checks.
bool needs_budgets(const std::string& experiment);

struct RunOptions {
  const BudgetTable* budgets = nullptr;  // null: calibration mode
  bool explore_open_case = false;
};

struct ExperimentOutput {
  std::string name;
  std::vector<InequalityReport> reports;
  std::vector<LimitTrace> traces;
  std::string gauge_csv;  // with header; empty when no gauge was built
};

/// Checks every parameter grid of the named experiments against the
/// verifiers' preconditions. Throws FormatError or ParameterError; nothing is
/// computed.
void validate_plan(const ExperimentConfig& config, const std::vector<std::string>& experiments,
                   const RunOptions& options);

/// Runs one experiment over the corpus. Independent jobs run concurrently and
/// are merged in job order, so the output does not depend on thread count.
ExperimentOutput run_experiment(const std::string& name, const ExperimentConfig& config,
                                const std::vector<CorpusMember>& corpus, const RunOptions& options);

/// reports.csv, traces.csv, gauge.csv, summary.txt, plot.dat and plot.gp in
/// `dir` (created if needed).
void write_outputs(const ExperimentOutput& out, const std::string& dir);

/// Budget per budget-tier id: twice the largest ratio observed among
/// non-degenerate reports.
BudgetTable calibrate(const std::vector<ExperimentOutput>& outputs, const std::string& corpus_hash);

}  // namespace agf
