#pragma once
// Deterministic text output: fixed 17-significant-digit float formatting and
// small CSV helpers used by the command-line front end and the test suite.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "core.hpp"

namespace uscsim {

inline constexpr const char* library_version = "1.0.0";

// fixed formatting: 17 significant digits, locale-independent
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CsvWriter {
  std::ofstream out;

  explicit CsvWriter(const std::string& path) : out(path) {
    if (!out) throw ParseError("cannot open output file: " + path);
  }
  // first line: comment recording the resolved configuration and version
  void comment(const std::string& text) { out << "# " << text << "\n"; }
  void header(const std::vector<std::string>& cols) {
    for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << "\n";
  }
  void row_doubles(const std::vector<double>& vals) {
    for (size_t i = 0; i < vals.size(); ++i) out << (i ? "," : "") << format_double(vals[i]);
    out << "\n";
  }
};

}  // namespace uscsim
