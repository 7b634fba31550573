#include "agf/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "agf/error.hpp"
#include "agf/grid_io.hpp"

namespace agf {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::degenerate: return "degenerate";
    case Verdict::logged: return "logged";
  }
  return "?";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  if (s == "degenerate") return Verdict::degenerate;
  if (s == "logged") return Verdict::logged;
  throw FormatError("unknown verdict '" + s + "'");
}

namespace {

double ratio_of(double lhs, double rhs) {
  if (lhs == 0.0 && rhs == 0.0) return 0.0;
  if (rhs == 0.0) return std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

}  // namespace

InequalityReport make_report(std::string id, std::string function_id, Json params, double lhs, double rhs,
                             double budget, std::string truncation) {
  InequalityReport r;
  r.id = std::move(id);
  r.function_id = std::move(function_id);
  r.params = std::move(params);
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = ratio_of(lhs, rhs);
  r.budget = budget;
  r.truncation = std::move(truncation);
  if (lhs == 0.0 && rhs == 0.0)
    r.verdict = Verdict::degenerate;
  else
    r.verdict = (r.ratio <= budget) ? Verdict::pass : Verdict::fail;  // NaN fails
  return r;
}

InequalityReport make_logged(std::string id, std::string function_id, Json params, double lhs, double rhs,
                             std::string truncation) {
  InequalityReport r = make_report(std::move(id), std::move(function_id), std::move(params), lhs, rhs, 0.0,
                                   std::move(truncation));
  r.verdict = Verdict::logged;
  return r;
}

void LimitTrace::add(std::string series_name, int m, double parameter, double value, double target) {
  points.push_back({std::move(series_name), m, parameter, value, target, target != 0.0 ? value / target - 1.0 : 0.0});
}

std::vector<TracePoint> LimitTrace::series(const std::string& name) const {
  std::vector<TracePoint> out;
  for (const auto& p : points)
    if (p.series == name) out.push_back(p);
  return out;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

namespace {

constexpr const char* kReportHeader = "inequality_id,function_id,params_json,lhs,rhs,ratio,budget,verdict,truncation";

std::string json_text(const Json& j) {
  // Doubles inside params print with full precision through nlohmann's
  // shortest round-trip formatting.
  return j.dump();
}

}  // namespace

void write_reports_csv(std::ostream& out, const std::vector<InequalityReport>& reports) {
  out << kReportHeader << '\n';
  for (const auto& r : reports) {
    out << csv_quote(r.id) << ',' << csv_quote(r.function_id) << ',' << csv_quote(json_text(r.params)) << ','
        << fmt_double(r.lhs) << ',' << fmt_double(r.rhs) << ',' << fmt_double(r.ratio) << ','
        << fmt_double(r.budget) << ',' << to_string(r.verdict) << ',' << csv_quote(r.truncation) << '\n';
  }
}

std::vector<InequalityReport> read_reports_csv(std::istream& in) {
  std::vector<InequalityReport> out;
  std::string line;
  if (!std::getline(in, line) || line.rfind("inequality_id,", 0) != 0) throw FormatError("not a report CSV");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = csv_split(line);
    if (f.size() != 9) throw FormatError("report CSV row has " + std::to_string(f.size()) + " fields");
    InequalityReport r;
    r.id = f[0];
    r.function_id = f[1];
    try {
      r.params = Json::parse(f[2]);
    } catch (const std::exception& e) {
      throw FormatError(std::string("bad params_json: ") + e.what());
    }
    r.lhs = std::stod(f[3]);
    r.rhs = std::stod(f[4]);
    r.ratio = std::stod(f[5]);
    r.budget = std::stod(f[6]);
    r.verdict = verdict_from_string(f[7]);
    r.truncation = f[8];
    out.push_back(std::move(r));
  }
  return out;
}

void write_traces_csv(std::ostream& out, const std::vector<LimitTrace>& traces) {
  out << "trace_id,function_id,params_json,series,m,parameter,value,target,gap\n";
  for (const auto& t : traces)
    for (const auto& p : t.points)
      out << csv_quote(t.id) << ',' << csv_quote(t.function_id) << ',' << csv_quote(json_text(t.params)) << ','
          << csv_quote(p.series) << ',' << p.m << ',' << fmt_double(p.parameter) << ',' << fmt_double(p.value)
          << ',' << fmt_double(p.target) << ',' << fmt_double(p.gap) << '\n';
}

std::string summary_table(const std::vector<InequalityReport>& reports) {
  struct Row {
    std::size_t counts[4] = {0, 0, 0, 0};
    double worst = 0.0;
    double budget = 0.0;
  };
  std::map<std::string, Row> rows;
  for (const auto& r : reports) {
    Row& row = rows[r.id];
    ++row.counts[static_cast<int>(r.verdict)];
    if (r.verdict != Verdict::degenerate) row.worst = std::max(row.worst, r.ratio);
    row.budget = std::max(row.budget, r.budget);
  }
  std::ostringstream os;
  os << std::left << std::setw(22) << "inequality" << std::right << std::setw(7) << "pass" << std::setw(7) << "fail"
     << std::setw(7) << "degen" << std::setw(7) << "logged" << std::setw(16) << "worst_ratio" << std::setw(16)
     << "budget" << '\n';
  for (const auto& [id, row] : rows) {
    os << std::left << std::setw(22) << id << std::right << std::setw(7) << row.counts[0] << std::setw(7)
       << row.counts[1] << std::setw(7) << row.counts[2] << std::setw(7) << row.counts[3] << std::setw(16)
       << std::setprecision(8) << row.worst << std::setw(16) << row.budget << '\n';
  }
  return os.str();
}

bool any_failed(const std::vector<InequalityReport>& reports) {
  return std::any_of(reports.begin(), reports.end(), [](const auto& r) { return r.verdict == Verdict::fail; });
}

std::optional<double> BudgetTable::find(const std::string& id) const {
  auto it = budgets.find(id);
  if (it == budgets.end()) return std::nullopt;
  return it->second;
}

std::string BudgetTable::to_json() const {
  Json j;
  j["corpus_hash"] = corpus_hash;
  Json b = Json::object();
  for (const auto& [k, v] : budgets) b[k] = v;
  j["budgets"] = b;
  return j.dump(2) + "\n";
}

BudgetTable BudgetTable::from_json(const std::string& text) {
  BudgetTable t;
  try {
    const Json j = Json::parse(text);
    t.corpus_hash = j.at("corpus_hash").get<std::string>();
    for (const auto& [k, v] : j.at("budgets").items()) t.budgets[k] = v.get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad budget file: ") + e.what());
  }
  return t;
}

BudgetTable BudgetTable::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open budget file " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return from_json(ss.str());
}

void BudgetTable::save(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot write budget file " + path);
  os << to_json();
}

}  // namespace agf
