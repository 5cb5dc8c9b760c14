#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "riopt/geometry.hpp"

namespace riopt {

/// Shortest decimal representation that round-trips the exact double.
std::string format_number(double v);

struct CsvCell {
  std::string text;  // empty = blank field

  CsvCell() = default;
  explicit CsvCell(double v);
  explicit CsvCell(long v);
};

/// Fixed-header CSV writer; rejects non-finite numbers so traces stay clean.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  void row(const std::vector<CsvCell>& cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::filesystem::path path_;
};

/// Standalone SVG line plot (value vs iteration); log-scale y when requested.
void write_svg_line_plot(const std::filesystem::path& path, const std::vector<double>& xs,
                         const std::vector<double>& ys, const std::string& title,
                         const std::string& x_label, const std::string& y_label, bool log_y);

}  // namespace riopt
