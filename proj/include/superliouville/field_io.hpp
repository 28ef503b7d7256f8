#pragma once

// CSV dumps of node fields: header "x1,x2,value", one row per node with j in
// the outer loop and i in the inner loop, shortest round-trip decimal floats.

#include <iosfwd>
#include <string>
#include <vector>

#include "superliouville/geometry.hpp"

namespace superliouville {

/// Names accepted by export_field: u, psi2, T_re, T_im, exp2u.
const std::vector<std::string>& export_field_names();

/// Node values of a named field; ConfigError on an unknown name.
RealArray export_field(const SolutionPair& pair, const std::string& name);

void write_csv(std::ostream& out, const Grid& grid, const RealArray& values);
void write_csv_file(const std::string& path, const Grid& grid, const RealArray& values);

struct CsvField {
  Grid grid;
  RealArray values;
};

/// Inverse of write_csv. The grid is rebuilt from the coordinate columns;
/// ConfigError on malformed input or coordinates off a uniform lattice.
CsvField read_csv(std::istream& in);
CsvField read_csv_file(const std::string& path);

}  // namespace superliouville
