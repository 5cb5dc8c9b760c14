#include "riopt/trace.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace riopt {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvCell::CsvCell(double v) {
  if (!std::isfinite(v)) {
    throw std::runtime_error("trace: refusing to emit non-finite value");
  }
  text = format_number(v);
}

CsvCell::CsvCell(long v) : text(std::to_string(v)) {}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : columns_(header.size()), path_(path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  out_.open(path);
  if (!out_) throw std::runtime_error("trace: cannot open " + path.string() + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  if (cells.size() != columns_) {
    throw std::runtime_error("trace: row width mismatch in " + path_.string());
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i].text;
  }
  out_ << '\n';
  if (!out_) throw std::runtime_error("trace: write failed for " + path_.string());
}

namespace {

double map_y(double y, double lo, double hi, bool log_y, double height, double pad) {
  if (log_y) {
    y = std::log10(y);
    lo = std::log10(lo);
    hi = std::log10(hi);
  }
  if (hi <= lo) hi = lo + 1;
  return pad + (height - 2 * pad) * (1.0 - (y - lo) / (hi - lo));
}

}  // namespace

void write_svg_line_plot(const std::filesystem::path& path, const std::vector<double>& xs,
                         const std::vector<double>& ys, const std::string& title,
                         const std::string& x_label, const std::string& y_label, bool log_y) {
  if (xs.size() != ys.size()) throw std::invalid_argument("plot: xs/ys size mismatch");
  const double width = 720, height = 480, pad = 60;

  std::vector<double> px, py;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
    if (log_y && ys[i] <= 0) continue;
    px.push_back(xs[i]);
    py.push_back(ys[i]);
  }

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("plot: cannot open " + path.string());
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << width / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
      << "</text>\n";
  out << "<text x='" << width / 2 << "' y='" << height - 12
      << "' text-anchor='middle' font-size='12'>" << x_label << "</text>\n";
  out << "<text x='16' y='" << height / 2 << "' text-anchor='middle' font-size='12' transform='rotate(-90 16 "
      << height / 2 << ")'>" << y_label << (log_y ? " (log scale)" : "") << "</text>\n";
  out << "<rect x='" << pad << "' y='" << pad << "' width='" << width - 2 * pad << "' height='"
      << height - 2 * pad << "' fill='none' stroke='black'/>\n";

  if (!px.empty()) {
    double xlo = px.front(), xhi = px.front(), ylo = py.front(), yhi = py.front();
    for (std::size_t i = 0; i < px.size(); ++i) {
      xlo = std::min(xlo, px[i]);
      xhi = std::max(xhi, px[i]);
      ylo = std::min(ylo, py[i]);
      yhi = std::max(yhi, py[i]);
    }
    if (xhi <= xlo) xhi = xlo + 1;
    out << "<polyline fill='none' stroke='#1f6fb2' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < px.size(); ++i) {
      const double sx = pad + (width - 2 * pad) * (px[i] - xlo) / (xhi - xlo);
      const double sy = map_y(py[i], ylo, yhi, log_y, height, pad);
      out << sx << ',' << sy << ' ';
    }
    out << "'/>\n";
    out << "<text x='" << pad << "' y='" << pad - 8 << "' font-size='10'>" << format_number(yhi)
        << "</text>\n";
    out << "<text x='" << pad << "' y='" << height - pad + 14 << "' font-size='10'>"
        << format_number(ylo) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace riopt
