#pragma once

#include <string>
#include <vector>

namespace seasadj::io {

struct SeriesFile {
  std::vector<double> values;       // NaN marks missing
  std::vector<std::string> labels;  // optional per-row labels (first column)
  std::string name;
};

// Read one numeric column from a comma- or whitespace-delimited text file.
// column is zero-based; -1 selects the last column. A non-numeric first
// row is treated as a header. Empty fields become missing markers.
SeriesFile read_series(const std::string& path, int column = -1);

}  // namespace seasadj::io
