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

#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace poptransfer::cli {

/// Shortest round-trip-safe text for a double at 17 significant digits,
/// independent of the global locale.
std::string format_number(double v);

/// Column-oriented CSV writer with fixed formatting and `\n` line endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells);
  void add_row(std::span<const double> values);
  void write(std::ostream& out) const;
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

enum class LineStyle { LongDash, Solid, ShortDash };

struct Series {
  std::string label;
  LineStyle style;
  std::vector<double> y;
};

/// Self-contained SVG line plot with y in [0, 1].
std::string render_svg(const std::string& title, const std::string& x_label,
                       std::span<const double> x, std::span<const Series> series);

}  // namespace poptransfer::cli
