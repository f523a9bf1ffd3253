#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qaoap/common.hpp"

namespace qaoap {

/// Shortest round-trip decimal formatting. Keeps CSV/JSONL files byte-stable
/// across runs.
inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  if (back == v) {
    for (int prec = 1; prec <= 16; ++prec) {
      char probe[32];
      std::snprintf(probe, sizeof probe, "%.*g", prec, v);
      std::sscanf(probe, "%lf", &back);
      if (back == v) return probe;
    }
  }
  return buf;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  return out;
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path.string());
  return in;
}

/// Calls fn(line_number, line) for every line; line numbers are 1-based.
template <typename Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn) {
  auto in = open_input(path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    fn(lineno, line);
  }
}

}  // namespace qaoap
