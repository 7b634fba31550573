#pragma once

#include <iosfwd>
#include <string>

#include "agf/grid.hpp"
#include "agf/moduli.hpp"
#include "agf/step_function.hpp"

namespace agf {

/// AGF1 container: "AGF1", n (int64), shape (n x int64), cell_sizes, origin
/// (n x float64 each), then the row-major float64 values. Little endian.
/// Axis domains are not stored; a decoded grid has every axis on the line.
std::string encode_agf1(const GridFunction& f);
GridFunction decode_agf1(const std::string& bytes);
void write_agf1(const std::string& path, const GridFunction& f);
GridFunction read_agf1(const std::string& path);

/// Small hand-written grids: one "i_0,...,i_{n-1},value" row per nonzero
/// cell. Optional header lines "# shape=4x4", "# cell_sizes=0.25,0.25",
/// "# origin=0,0"; without a shape line the extents are taken from the
/// largest index. Values are replaced by their absolute values.
GridFunction read_grid_csv(std::istream& in);
GridFunction read_grid_csv_file(const std::string& path);

void write_step_function_csv(std::ostream& out, const StepFunction& g);
void write_modulus_curve_csv(std::ostream& out, const ModulusCurve& w);

/// "%.17g", the format used for every double in CSV output.
std::string fmt_double(double x);

}  // namespace agf
