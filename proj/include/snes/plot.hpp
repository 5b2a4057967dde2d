/*
 * Copyright 2026 The SNES Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SNES_PLOT_HPP
#define SNES_PLOT_HPP

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace snes {

/// A metrics table as written by the harness: a `# schema:` line, a header
/// row, and comma-separated data rows. Empty cells stay empty strings.
struct CsvTable {
  std::string schema;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws SchemaError when the column is missing.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;

  /// Numeric values of a column; empty cells become nullopt.
  std::vector<std::optional<double>> numeric(std::string_view name) const;
};

/// Throws SchemaError on an empty stream, a missing schema line, or ragged rows.
CsvTable read_csv_table(std::istream& in);
CsvTable load_csv_table(const std::string& path);

struct Band {
  std::string label;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> std;  // empty: no band
  bool dashed = false;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Band> series;
};

/// Self-contained SVG line chart: solid (or dashed) mean lines with a
/// shaded +-1 std band. Output depends only on the input.
std::string render_svg(const Chart& chart);

/// Reads aggregate or per-repetition metrics CSVs and writes
/// return.svg, sat_prop.svg, c_sat.svg, verify_c_sat.svg,
/// return_split.svg and cost_split.svg into out_dir. Each input becomes one
/// series, labelled by its directory for aggregate files and by its file
/// name otherwise. Returns the written paths.
std::vector<std::string> emit_plots(const std::vector<std::string>& inputs,
                                    const std::string& out_dir);

}  // namespace snes

#endif  // SNES_PLOT_HPP
