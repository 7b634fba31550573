#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace agf {

using Json = nlohmann::ordered_json;

enum class Verdict { pass, fail, degenerate, logged };
const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

/// Budget for inequalities whose constant is stated exactly: the constant is
/// folded into the right-hand side, leaving only rounding slack.
inline constexpr double kHardBudget = 1.0 + 1e-9;

struct InequalityReport {
  std::string id;
  std::string function_id;
  Json params = Json::object();
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double budget = 0.0;
  Verdict verdict = Verdict::pass;
  std::string truncation;
};

/// ratio = lhs/rhs (0 when both vanish); degenerate when lhs = rhs = 0,
/// otherwise pass iff ratio <= budget.
InequalityReport make_report(std::string id, std::string function_id, Json params, double lhs, double rhs,
                             double budget, std::string truncation = {});
/// Ratio and sides kept, no verdict asserted.
InequalityReport make_logged(std::string id, std::string function_id, Json params, double lhs, double rhs,
                             std::string truncation = {});

/// One sequence approaching a limit. Rows share the trace and function id;
/// `series` separates curves plotted together (e.g. with and without factors).
struct TracePoint {
  std::string series;
  int m = 0;
  double parameter = 0.0;
  double value = 0.0;
  double target = 0.0;
  double gap = 0.0;  // value / target - 1
};

struct LimitTrace {
  std::string id;
  std::string function_id;
  Json params = Json::object();
  std::vector<TracePoint> points;
  void add(std::string series, int m, double parameter, double value, double target);
  /// Points of one series in insertion order.
  std::vector<TracePoint> series(const std::string& name) const;
};

void write_reports_csv(std::ostream& out, const std::vector<InequalityReport>& reports);
std::vector<InequalityReport> read_reports_csv(std::istream& in);
void write_traces_csv(std::ostream& out, const std::vector<LimitTrace>& traces);

/// Text table: per inequality id, counts per verdict, worst ratio and budget.
std::string summary_table(const std::vector<InequalityReport>& reports);

bool any_failed(const std::vector<InequalityReport>& reports);

/// Frozen empirical constants keyed by inequality id, tied to the corpus they
/// were measured on.
struct BudgetTable {
  std::string corpus_hash;
  std::map<std::string, double> budgets;

  std::optional<double> find(const std::string& id) const;
  std::string to_json() const;
  static BudgetTable from_json(const std::string& text);
  static BudgetTable load(const std::string& path);
  void save(const std::string& path) const;
};

/// CSV field quoting for values that may contain commas or quotes.
std::string csv_quote(const std::string& s);
std::vector<std::string> csv_split(const std::string& line);

}  // namespace agf
