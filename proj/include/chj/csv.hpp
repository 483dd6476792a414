#pragma once

#include <string>
#include <vector>

#include "chj/grid.hpp"

namespace chj {

/// "%.12g", with -0 printed as 0.
std::string format_number(double v);

/// Header line followed by one comma-separated line per row.
std::string csv_text(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

/// Columns x,u (1-D) or x0,x1,u (2-D) in node order.
std::string grid_function_csv(const GridFunction& f);

/// Writes `text` to `path`. Throws PreconditionError when the parent
/// directory does not exist or the file cannot be opened.
void write_text(const std::string& path, const std::string& text);

/// Reads a grid-function CSV and checks that its coordinates are the nodes
/// of `g` in order.
GridFunction read_grid_function(const std::string& path, const GridSpec& g);

}  // namespace chj
