#include "chj/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace chj {

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_text(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += format_number(r[i]);
    }
    out += '\n';
  }
  return out;
}

std::string grid_function_csv(const GridFunction& f) {
  const GridSpec& g = f.grid;
  std::vector<std::vector<double>> rows;
  rows.reserve(g.num_nodes());
  for (int k = 0; k < g.num_nodes(); ++k) {
    const Coord x = g.node(k);
    if (g.dim == 1) {
      rows.push_back({x[0], f.values[k]});
    } else {
      rows.push_back({x[0], x[1], f.values[k]});
    }
  }
  return csv_text(g.dim == 1 ? std::vector<std::string>{"x", "u"}
                             : std::vector<std::string>{"x0", "x1", "u"},
                  rows);
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path() && !std::filesystem::is_directory(p.parent_path(), ec))
    throw PreconditionError("output directory does not exist: " + p.parent_path().string());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PreconditionError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw PreconditionError("failed writing " + path);
}

GridFunction read_grid_function(const std::string& path, const GridSpec& g) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw PreconditionError(path + " is empty");
  const int cols = g.dim + 1;
  std::vector<double> values;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string cell;
    double rec[3] = {0, 0, 0};
    int c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= cols) throw PreconditionError(path + ": too many columns");
      char* end = nullptr;
      rec[c] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw PreconditionError(path + ": bad number '" + cell + "'");
      ++c;
    }
    if (c != cols) throw PreconditionError(path + ": expected " + std::to_string(cols) + " columns");
    if (row >= g.num_nodes()) throw PreconditionError(path + ": more rows than grid nodes");
    const Coord x = g.node(row);
    for (int a = 0; a < g.dim; ++a)
      if (std::abs(rec[a] - x[a]) > 1e-9 * (1.0 + std::abs(x[a])))
        throw PreconditionError(path + ": row " + std::to_string(row + 1) +
                                " does not sit on the grid");
    values.push_back(rec[g.dim]);
    ++row;
  }
  if (row != g.num_nodes()) throw PreconditionError(path + ": fewer rows than grid nodes");
  return GridFunction(g, std::move(values));
}

}  // namespace chj
