// Copyright 2026 The poptransfer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace poptransfer::cli {

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

namespace {

std::string fixed(double v, int digits = 2) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::fixed, digits);
  return std::string(buf.data(), res.ptr);
}

}  // namespace

void CsvWriter::add_row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

void CsvWriter::add_row(std::span<const double> values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  rows_.push_back(std::move(cells));
}

void CsvWriter::write(std::ostream& out) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
}

std::string CsvWriter::str() const {
  std::ostringstream s;
  write(s);
  return s.str();
}

std::string render_svg(const std::string& title, const std::string& x_label,
                       std::span<const double> x, std::span<const Series> series) {
  constexpr double kWidth = 640, kHeight = 420;
  constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  double x_min = x.empty() ? 0.0 : x.front();
  double x_max = x.empty() ? 1.0 : x.back();
  if (!(x_max > x_min)) x_max = x_min + 1.0;

  auto px = [&](double v) { return kLeft + (v - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double v) { return kTop + (1.0 - std::clamp(v, 0.0, 1.0)) * plot_h; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth, 0)
    << "\" height=\"" << fixed(kHeight, 0) << "\" viewBox=\"0 0 " << fixed(kWidth, 0) << ' '
    << fixed(kHeight, 0) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << fixed(kWidth / 2, 0) << "\" y=\"22\" text-anchor=\"middle\">" << title
    << "</text>\n";
  s << "<rect x=\"" << fixed(kLeft, 0) << "\" y=\"" << fixed(kTop, 0) << "\" width=\""
    << fixed(plot_w, 0) << "\" height=\"" << fixed(plot_h, 0)
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = i / 4.0;
    s << "<text x=\"" << fixed(kLeft - 6, 0) << "\" y=\"" << fixed(py(v) + 4)
      << "\" text-anchor=\"end\">" << fixed(v) << "</text>\n";
    const double xv = x_min + (x_max - x_min) * v;
    s << "<text x=\"" << fixed(px(xv)) << "\" y=\"" << fixed(kTop + plot_h + 16)
      << "\" text-anchor=\"middle\">" << fixed(xv, 3) << "</text>\n";
  }
  s << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"" << fixed(kHeight - 10)
    << "\" text-anchor=\"middle\">" << x_label << "</text>\n";

  double legend_y = kTop + 16;
  for (const auto& ser : series) {
    std::string dash;
    if (ser.style == LineStyle::LongDash) dash = " stroke-dasharray=\"12,6\"";
    if (ser.style == LineStyle::ShortDash) dash = " stroke-dasharray=\"3,3\"";
    s << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"" << dash << " points=\"";
    const std::size_t m = std::min(x.size(), ser.y.size());
    for (std::size_t i = 0; i < m; ++i) {
      if (i) s << ' ';
      s << fixed(px(x[i])) << ',' << fixed(py(ser.y[i]));
    }
    s << "\"/>\n";
    s << "<line x1=\"" << fixed(kLeft + plot_w - 120) << "\" y1=\"" << fixed(legend_y - 4)
      << "\" x2=\"" << fixed(kLeft + plot_w - 90) << "\" y2=\"" << fixed(legend_y - 4)
      << "\" stroke=\"black\" stroke-width=\"1.5\"" << dash << "/>\n";
    s << "<text x=\"" << fixed(kLeft + plot_w - 84) << "\" y=\"" << fixed(legend_y) << "\">"
      << ser.label << "</text>\n";
    legend_y += 16;
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace poptransfer::cli
