#include "agf/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "agf/error.hpp"
#include "agf/grid_io.hpp"
#include "agf/rearrange.hpp"

namespace agf {

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1p-53; }

const std::vector<std::string>& corpus_families() {
  static const std::vector<std::string> f{"indicator-box",  "separable-exp-staircase", "anisotropic-staircase",
                                          "hat-multilinear", "random-mdec",             "random-general"};
  return f;
}

std::string CorpusSpec::id() const {
  std::ostringstream os;
  os << family << '/';
  for (std::size_t k = 0; k < shape.size(); ++k) os << (k ? "x" : "") << shape[k];
  os << "/s" << seed;
  if (refine > 1) os << "/r" << refine;
  if (!cell_sizes.empty()) {
    os << "/c";
    for (std::size_t k = 0; k < cell_sizes.size(); ++k) os << (k ? "," : "") << fmt_double(cell_sizes[k]);
  }
  return os.str();
}

namespace {

std::size_t parse_count(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v <= 0) throw FormatError("bad " + what + " '" + s + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

CorpusSpec parse_corpus_spec(const std::string& text) {
  std::istringstream is(text);
  CorpusSpec s;
  std::string shape;
  if (!(is >> s.family >> shape)) throw FormatError("corpus entry needs a family and a shape: '" + text + "'");
  if (std::find(corpus_families().begin(), corpus_families().end(), s.family) == corpus_families().end())
    throw FormatError("unknown corpus family '" + s.family + "'");
  std::istringstream ss(shape);
  for (std::string e; std::getline(ss, e, 'x');) s.shape.push_back(parse_count(e, "extent"));
  if (s.shape.empty()) throw FormatError("empty shape in '" + text + "'");
  for (std::string tok; is >> tok;) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw FormatError("expected key=value, got '" + tok + "'");
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "seed") {
      try {
        std::size_t used = 0;
        s.seed = std::stoull(val, &used);
        if (used != val.size()) throw FormatError("");
      } catch (const std::exception&) {
        throw FormatError("bad seed '" + val + "'");
      }
      s.seed_given = true;
    } else if (key == "refine") {
      s.refine = parse_count(val, "refine factor");
    } else if (key == "cell") {
      std::istringstream cs(val);
      for (std::string c; std::getline(cs, c, ',');) {
        double x = 0.0;
        try {
          x = std::stod(c);
        } catch (const std::exception&) {
          throw FormatError("bad cell size '" + c + "'");
        }
        if (!(x > 0.0)) throw FormatError("cell sizes must be positive");
        s.cell_sizes.push_back(x);
      }
      if (s.cell_sizes.size() != s.shape.size()) throw FormatError("one cell size per axis expected");
    } else {
      throw FormatError("unknown corpus option '" + key + "'");
    }
  }
  if (s.refine > 1 && s.family != "hat-multilinear") throw FormatError("refine applies to hat-multilinear only");
  return s;
}

GridFunction generate(const CorpusSpec& spec) {
  const std::size_t n = spec.shape.size();
  std::vector<std::size_t> shape(spec.shape);
  for (auto& e : shape) e *= spec.refine;
  std::vector<double> cells = spec.cell_sizes;
  if (cells.empty())
    for (auto e : shape) cells.push_back(1.0 / static_cast<double>(e));
  std::size_t total = 1;
  for (auto e : shape) total *= e;
  std::mt19937_64 rng(spec.seed);
  auto uniform = [&] { return unit_uniform(rng()); };
  std::vector<double> values(total, 0.0);
  std::vector<std::size_t> strides(n);
  {
    std::size_t acc = 1;
    for (std::size_t k = n; k > 0; --k) {
      strides[k - 1] = acc;
      acc *= shape[k - 1];
    }
  }
  auto coord = [&](std::size_t flat, std::size_t k) { return (flat / strides[k]) % shape[k]; };

  const std::string& fam = spec.family;
  if (fam == "indicator-box") {
    std::fill(values.begin(), values.end(), 1.0);
  } else if (fam == "separable-exp-staircase") {
    std::vector<double> a(n);
    for (auto& x : a) x = 1.0 + 3.0 * uniform();
    for (std::size_t i = 0; i < total; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a[k] * (static_cast<double>(coord(i, k)) + 0.5) * cells[k];
      values[i] = std::exp(-s);
    }
  } else if (fam == "anisotropic-staircase") {
    for (std::size_t i = 0; i < total; ++i) {
      double v = 1.0;
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t steps = std::min<std::size_t>(std::size_t{2} << k, shape[k]);
        const std::size_t level = coord(i, k) * steps / shape[k];
        v *= static_cast<double>(steps - level) / static_cast<double>(steps);
      }
      values[i] = v;
    }
  } else if (fam == "hat-multilinear") {
    // Node values on the (shape + 1) coarse lattice; zero on the boundary.
    std::vector<std::size_t> next(n), nst(n);
    std::size_t nodes = 1;
    for (std::size_t k = n; k > 0; --k) {
      next[k - 1] = spec.shape[k - 1] + 1;
      nst[k - 1] = nodes;
      nodes *= next[k - 1];
    }
    std::vector<double> node(nodes, 0.0);
    for (std::size_t q = 0; q < nodes; ++q) {
      bool boundary = false;
      double hat = 1.0;
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = (q / nst[k]) % next[k];
        if (j == 0 || j == spec.shape[k]) boundary = true;
        const double x = static_cast<double>(j) / static_cast<double>(spec.shape[k]);
        hat *= 1.0 - std::fabs(2.0 * x - 1.0);
      }
      if (spec.seed == 0)
        node[q] = hat;
      else
        node[q] = boundary ? 0.0 : uniform();
    }
    const double R = static_cast<double>(spec.refine);
    for (std::size_t i = 0; i < total; ++i) {
      // Multilinear interpolation at the fine cell centre.
      std::vector<std::size_t> base(n);
      std::vector<double> w(n);
      for (std::size_t k = 0; k < n; ++k) {
        const double u = (static_cast<double>(coord(i, k)) + 0.5) / R;
        base[k] = static_cast<std::size_t>(std::floor(u));
        w[k] = u - static_cast<double>(base[k]);
      }
      double v = 0.0;
      for (std::size_t eps = 0; eps < (std::size_t{1} << n); ++eps) {
        double wt = 1.0;
        std::size_t q = 0;
        for (std::size_t k = 0; k < n; ++k) {
          const bool up = (eps >> k) & 1u;
          wt *= up ? w[k] : 1.0 - w[k];
          q += (base[k] + (up ? 1 : 0)) * nst[k];
        }
        v += wt * node[q];
      }
      values[i] = std::max(0.0, v);
    }
  } else if (fam == "random-mdec" || fam == "random-general") {
    for (auto& v : values) {
      const double u = uniform();
      v = u;
      if (fam == "random-general" && uniform() < 0.25) v = 0.0;
    }
    if (fam == "random-mdec") {
      GridFunction g = make_grid_function(shape, values, cells);
      g = iterated_rearrangement(g, Permutation::identity(n));
      return g.with_domains(std::vector<AxisDomain>(n, AxisDomain::line));
    }
  } else {
    throw FormatError("unknown corpus family '" + fam + "'");
  }
  return make_grid_function(std::move(shape), std::move(values), std::move(cells));
}

std::vector<CorpusMember> generate_corpus(const std::vector<CorpusSpec>& specs) {
  std::vector<CorpusMember> out;
  for (const auto& s : specs) {
    const std::string id = s.id();
    for (const auto& m : out)
      if (m.id == id) throw FormatError("duplicate corpus entry '" + id + "'");
    out.push_back({id, s, generate(s)});
  }
  return out;
}

std::string corpus_hash(const std::vector<CorpusMember>& corpus) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](const std::string& bytes) {
    for (unsigned char ch : bytes) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& m : corpus) {
    feed(m.id);
    feed(encode_agf1(m.f));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace agf
