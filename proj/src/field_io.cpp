#include "superliouville/field_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "superliouville/diagnostics.hpp"
#include "superliouville/errors.hpp"
#include "superliouville/operators.hpp"

namespace superliouville {

const std::vector<std::string>& export_field_names() {
  static const std::vector<std::string> names{"u", "psi2", "T_re", "T_im", "exp2u"};
  return names;
}

RealArray export_field(const SolutionPair& pair, const std::string& name) {
  if (name == "u") return pair.u.values;
  if (name == "psi2") return pair.psi.norm2();
  if (name == "T_re") return compute_T(pair).values.real();
  if (name == "T_im") return compute_T(pair).values.imag();
  if (name == "exp2u") return guarded_exp(pair.u.values, 2.0).value;
  throw ConfigError("unknown field name '" + name + "'");
}

namespace {

void append(std::string& line, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  line.append(buf, res.ptr);
}

double parse(const std::string& token, std::size_t row) {
  double v = 0.0;
  const char* end = token.data() + token.size();
  const auto res = std::from_chars(token.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError("bad number '" + token + "' on CSV row " + std::to_string(row));
  }
  return v;
}

}  // namespace

void write_csv(std::ostream& out, const Grid& grid, const RealArray& values) {
  if (values.rows() != grid.nx || values.cols() != grid.ny) throw ConfigError("field shape does not match its grid");
  out << "x1,x2,value\n";
  std::string line;
  for (Index j = 0; j < grid.ny; ++j) {
    for (Index i = 0; i < grid.nx; ++i) {
      line.clear();
      append(line, grid.x1(i));
      line += ',';
      append(line, grid.x2(j));
      line += ',';
      append(line, values(i, j));
      line += '\n';
      out << line;
    }
  }
}

void write_csv_file(const std::string& path, const Grid& grid, const RealArray& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  write_csv(out, grid, values);
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

CsvField read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "x1,x2,value") throw ConfigError("CSV header must be 'x1,x2,value'");
  std::vector<double> xs, ys, vs;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c, extra;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ',') ||
        std::getline(ss, extra, ',')) {
      throw ConfigError("CSV row " + std::to_string(row) + " needs three columns");
    }
    xs.push_back(parse(a, row));
    ys.push_back(parse(b, row));
    vs.push_back(parse(c, row));
  }
  if (xs.size() < 4) throw ConfigError("CSV holds too few nodes for a grid");

  Index nx = 1;
  while (std::size_t(nx) < ys.size() && ys[std::size_t(nx)] == ys[0]) ++nx;
  if (nx < 2 || xs.size() % std::size_t(nx) != 0) throw ConfigError("CSV rows do not form a lattice");
  const Index ny = Index(xs.size()) / nx;
  if (ny < 2) throw ConfigError("CSV rows do not form a lattice");

  CsvField out;
  out.grid.origin = Vector2(xs[0], ys[0]);
  out.grid.h = (xs[std::size_t(nx) - 1] - xs[0]) / double(nx - 1);
  out.grid.nx = nx;
  out.grid.ny = ny;
  if (!(out.grid.h > 0.0)) throw ConfigError("CSV x1 column must increase along a row");
  out.values.resize(nx, ny);
  const double tol = 1e-9 * (out.grid.origin.norm() + out.grid.h * double(std::max(nx, ny)));
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) {
      const std::size_t k = std::size_t(i + nx * j);
      if ((Vector2(xs[k], ys[k]) - out.grid.node(i, j)).norm() > tol) {
        throw ConfigError("CSV node " + std::to_string(k) + " is off the uniform lattice");
      }
      out.values(i, j) = vs[k];
    }
  }
  return out;
}

CsvField read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return read_csv(in);
}

}  // namespace superliouville
