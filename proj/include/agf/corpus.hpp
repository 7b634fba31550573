#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agf/grid.hpp"

namespace agf {

/// Test function families.
///
///  - indicator-box: all ones on the grid. Not Lipschitz; every Lorentz norm
///    finite; moduli behave like delta^{1/p}.
///  - separable-exp-staircase: prod_k exp(-a_k x_k) at cell centres, a_k in
///    [1, 4) drawn from the seed. Strictly decreasing in each variable.
///  - anisotropic-staircase: prod_k of a decreasing staircase with 2^{k+1}
///    plateaus along axis k. In M_dec with many ties.
///  - hat-multilinear: continuous, piecewise multilinear on the coarse grid
///    `shape`, vanishing on the boundary, sampled at cell centres of a grid
///    refined `refine` times. Seed 0 gives the tensor hat prod (1 - |2x_k - 1|);
///    other seeds draw the interior node values. Lipschitz down to the fine
///    scale, so limit relations apply.
///  - random-mdec: uniform values sorted into M_dec (identity order).
///  - random-general: uniform values with about 25% zeros.
///
/// Cell sizes default to 1 / (extent) per axis, i.e. the unit cube.
struct CorpusSpec {
  std::string family;
  std::vector<std::size_t> shape;   // before refinement
  std::vector<double> cell_sizes;   // optional, after refinement
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t refine = 1;

  std::string id() const;
};

struct CorpusMember {
  std::string id;
  CorpusSpec spec;
  GridFunction f;
};

const std::vector<std::string>& corpus_families();

/// "<family> <shape, e.g. 16x16> [cell=a,b] [seed=N] [refine=R]".
CorpusSpec parse_corpus_spec(const std::string& text);

GridFunction generate(const CorpusSpec& spec);
std::vector<CorpusMember> generate_corpus(const std::vector<CorpusSpec>& specs);

/// 64-bit FNV-1a over each member's id and AGF1 bytes, as 16 hex digits.
std::string corpus_hash(const std::vector<CorpusMember>& corpus);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
double unit_uniform(std::uint64_t bits);

}  // namespace agf
