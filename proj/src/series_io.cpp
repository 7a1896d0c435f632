#include "series_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace seasadj::io {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  if (line.find(',') != std::string::npos) {
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
  } else {
    std::stringstream ss(line);
    std::string f;
    while (ss >> f) fields.push_back(f);
  }
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stod(t, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == t.size();
}

}  // namespace

SeriesFile read_series(const std::string& path, int column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open series file: " + path);

  SeriesFile sf;
  sf.name = std::filesystem::path(path).stem().string();
  std::string line;
  int row = 0;
  bool first_data_row = true;
  while (std::getline(in, line)) {
    ++row;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    const int ncol = static_cast<int>(fields.size());
    const int col = column < 0 ? ncol - 1 : column;
    if (col >= ncol)
      throw IoError(path + ": row " + std::to_string(row) + " has only " +
                    std::to_string(ncol) + " columns");
    const std::string cell = trim(fields[col]);
    double v = 0.0;
    if (cell.empty()) {
      sf.values.push_back(std::nan(""));
    } else if (parse_double(cell, v)) {
      sf.values.push_back(v);
    } else if (first_data_row) {
      // Header row.
      first_data_row = false;
      continue;
    } else {
      throw IoError(path + ": unparseable numeric value '" + cell +
                    "' at row " + std::to_string(row) + ", column " +
                    std::to_string(col + 1));
    }
    if (ncol > 1 && col != 0) sf.labels.push_back(trim(fields[0]));
    first_data_row = false;
  }
  if (sf.values.empty()) throw IoError(path + ": no numeric values found");
  return sf;
}

}  // namespace seasadj::io
