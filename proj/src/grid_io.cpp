#include "agf/grid_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "agf/error.hpp"

namespace agf {

static_assert(std::endian::native == std::endian::little, "AGF1 I/O assumes a little-endian host");

namespace {

template <class T>
void put(std::string& out, T x) {
  char buf[sizeof(T)];
  std::memcpy(buf, &x, sizeof(T));
  out.append(buf, sizeof(T));
}

template <class T>
T get(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw FormatError("AGF1: truncated input");
  T x;
  std::memcpy(&x, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(trim(s), &used);
  } catch (const std::exception&) {
    throw FormatError("not a number: '" + s + "'");
  }
  if (used != trim(s).size()) throw FormatError("not a number: '" + s + "'");
  return x;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split(s, ',')) out.push_back(parse_double(t));
  return out;
}

}  // namespace

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string encode_agf1(const GridFunction& f) {
  std::string out = "AGF1";
  put<std::int64_t>(out, static_cast<std::int64_t>(f.dims()));
  for (auto e : f.shape()) put<std::int64_t>(out, static_cast<std::int64_t>(e));
  for (double c : f.cell_sizes()) put<double>(out, c);
  for (double o : f.origin()) put<double>(out, o);
  for (double v : f.values()) put<double>(out, v);
  return out;
}

GridFunction decode_agf1(const std::string& bytes) {
  if (bytes.size() < 4 || bytes.compare(0, 4, "AGF1") != 0) throw FormatError("AGF1: bad magic");
  std::size_t pos = 4;
  const auto n = get<std::int64_t>(bytes, pos);
  if (n <= 0 || n > 16) throw FormatError("AGF1: bad dimension");
  std::vector<std::size_t> shape(static_cast<std::size_t>(n));
  std::size_t total = 1;
  for (auto& e : shape) {
    const auto x = get<std::int64_t>(bytes, pos);
    if (x <= 0) throw FormatError("AGF1: bad extent");
    e = static_cast<std::size_t>(x);
    total *= e;
  }
  std::vector<double> cells(shape.size()), origin(shape.size());
  for (auto& c : cells) c = get<double>(bytes, pos);
  for (auto& o : origin) o = get<double>(bytes, pos);
  if (bytes.size() - pos != total * sizeof(double)) throw FormatError("AGF1: value block has the wrong length");
  std::vector<double> values(total);
  for (auto& v : values) v = get<double>(bytes, pos);
  return make_grid_function(std::move(shape), std::move(values), std::move(cells), std::move(origin));
}

void write_agf1(const std::string& path, const GridFunction& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open " + path + " for writing");
  const std::string b = encode_agf1(f);
  os.write(b.data(), static_cast<std::streamsize>(b.size()));
}

GridFunction read_agf1(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return decode_agf1(ss.str());
}

GridFunction read_grid_csv(std::istream& in) {
  std::vector<std::size_t> shape;
  std::vector<double> cells, origin;
  std::map<std::vector<std::size_t>, double> entries;
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(body.substr(0, eq)), val = trim(body.substr(eq + 1));
      if (key == "shape") {
        shape.clear();
        for (const auto& t : split(val, 'x')) shape.push_back(static_cast<std::size_t>(parse_double(t)));
      } else if (key == "cell_sizes") {
        cells = parse_doubles(val);
      } else if (key == "origin") {
        origin = parse_doubles(val);
      }
      continue;
    }
    const auto fields = parse_doubles(line);
    if (fields.size() < 2) throw FormatError("grid CSV row needs an index tuple and a value");
    if (n == 0) n = fields.size() - 1;
    if (fields.size() - 1 != n) throw FormatError("grid CSV rows disagree on the dimension");
    std::vector<std::size_t> idx(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (fields[k] < 0.0 || fields[k] != std::floor(fields[k])) throw FormatError("bad cell index in grid CSV");
      idx[k] = static_cast<std::size_t>(fields[k]);
    }
    entries[idx] = std::fabs(fields[n]);
  }
  if (n == 0) n = !shape.empty() ? shape.size() : (!cells.empty() ? cells.size() : 0);
  if (n == 0) throw FormatError("grid CSV has no rows and no shape");
  if (shape.empty()) {
    shape.assign(n, 1);
    for (const auto& [idx, v] : entries)
      for (std::size_t k = 0; k < n; ++k) shape[k] = std::max(shape[k], idx[k] + 1);
  }
  if (shape.size() != n) throw FormatError("grid CSV shape header disagrees with the rows");
  if (cells.empty()) cells.assign(n, 1.0);
  std::size_t total = 1;
  for (auto e : shape) total *= e;
  std::vector<double> values(total, 0.0);
  for (const auto& [idx, v] : entries) {
    std::size_t flat = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (idx[k] >= shape[k]) throw FormatError("grid CSV index outside the declared shape");
      flat = flat * shape[k] + idx[k];
    }
    values[flat] = v;
  }
  return make_grid_function(std::move(shape), std::move(values), std::move(cells), std::move(origin));
}

GridFunction read_grid_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path);
  return read_grid_csv(is);
}

void write_step_function_csv(std::ostream& out, const StepFunction& g) {
  out << "# left-continuous: value holds on (previous t_right, t_right]; zero after the last row\n";
  out << "t_right,value\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    out << fmt_double(g.breakpoints()[i]) << ',' << fmt_double(g.values()[i]) << '\n';
}

void write_modulus_curve_csv(std::ostream& out, const ModulusCurve& w) {
  out << "delta,omega\n";
  for (std::size_t i = 0; i < w.deltas().size(); ++i)
    out << fmt_double(w.deltas()[i]) << ',' << fmt_double(w.omegas()[i]) << '\n';
}

}  // namespace agf
