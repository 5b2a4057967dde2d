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

#include "snes/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "snes/errors.hpp"
#include "snes/format.hpp"

namespace snes {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 180.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 56.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

/// Round tick step: 1, 2 or 5 times a power of ten.
double tick_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

std::string tick_label(double v, double step) {
  const int digits = step >= 1.0 ? 0 : static_cast<int>(std::ceil(-std::log10(step)));
  if (std::abs(v) < step * 1e-9) v = 0.0;
  return fixed(v, digits);
}

struct Source {
  CsvTable table;
  std::string label;
  bool aggregate = false;
};

Band band_for(const Source& src, std::string_view metric, const std::string& label, bool dashed) {
  const std::string mean_col = src.aggregate ? std::string(metric) + "_mean" : std::string(metric);
  const auto xs = src.table.numeric("episodes");
  const auto means = src.table.numeric(mean_col);
  std::vector<std::optional<double>> stds;
  if (src.aggregate) stds = src.table.numeric(std::string(metric) + "_std");
  Band band;
  band.label = label;
  band.dashed = dashed;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!xs[i] || !means[i]) continue;
    band.x.push_back(*xs[i]);
    band.mean.push_back(*means[i]);
    if (src.aggregate) band.std.push_back(stds[i].value_or(0.0));
  }
  return band;
}

}  // namespace

std::size_t CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw SchemaError("missing column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_column(std::string_view name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

std::vector<std::optional<double>> CsvTable::numeric(std::string_view name) const {
  const std::size_t c = column(name);
  std::vector<std::optional<double>> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    if (row[c].empty()) {
      out.emplace_back();
    } else {
      out.emplace_back(parse_double(row[c]));
    }
  }
  return out;
}

CsvTable read_csv_table(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw SchemaError("empty metrics file");
  if (line.rfind("# schema:", 0) != 0) throw SchemaError("missing '# schema:' line");
  table.schema = line.substr(9);
  table.schema.erase(0, table.schema.find_first_not_of(' '));
  if (!std::getline(in, line) || line.empty()) throw SchemaError("missing header row");
  table.header = split_row(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_row(line);
    if (cells.size() != table.header.size()) {
      throw SchemaError("row " + std::to_string(table.rows.size() + 1) + " has " +
                        std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

CsvTable load_csv_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open metrics file '" + path + "'");
  return read_csv_table(in);
}

std::string render_svg(const Chart& chart) {
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool any = false;
  for (const Band& b : chart.series) {
    for (std::size_t i = 0; i < b.x.size(); ++i) {
      const double sd = b.std.empty() ? 0.0 : b.std[i];
      if (!any) {
        x_min = x_max = b.x[i];
        y_min = b.mean[i] - sd;
        y_max = b.mean[i] + sd;
        any = true;
      }
      x_min = std::min(x_min, b.x[i]);
      x_max = std::max(x_max, b.x[i]);
      y_min = std::min(y_min, b.mean[i] - sd);
      y_max = std::max(y_max, b.mean[i] + sd);
    }
  }
  if (x_max <= x_min) x_max = x_min + 1.0;
  if (y_max <= y_min) {
    y_min -= 0.5;
    y_max += 0.5;
  }
  const double y_step = tick_step(y_max - y_min, 5);
  y_min = std::floor(y_min / y_step) * y_step;
  y_max = std::ceil(y_max / y_step) * y_step;
  const double x_step = tick_step(x_max - x_min, 6);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kTop + (y_max - y) / (y_max - y_min) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth, 0)
      << "\" height=\"" << fixed(kHeight, 0) << "\" viewBox=\"0 0 " << fixed(kWidth, 0) << ' '
      << fixed(kHeight, 0) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-size=\"15\">" << escape(chart.title) << "</text>\n";

  for (double y = y_min; y <= y_max + y_step * 1e-9; y += y_step) {
    svg << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(py(y)) << "\" x2=\""
        << fixed(kLeft + plot_w) << "\" y2=\"" << fixed(py(y))
        << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << fixed(kLeft - 6) << "\" y=\"" << fixed(py(y) + 4)
        << "\" text-anchor=\"end\">" << tick_label(y, y_step) << "</text>\n";
  }
  for (double x = std::ceil(x_min / x_step) * x_step; x <= x_max + x_step * 1e-9; x += x_step) {
    svg << "<line x1=\"" << fixed(px(x)) << "\" y1=\"" << fixed(kTop + plot_h) << "\" x2=\""
        << fixed(px(x)) << "\" y2=\"" << fixed(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fixed(px(x)) << "\" y=\"" << fixed(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << tick_label(x, x_step) << "</text>\n";
  }
  svg << "<rect x=\"" << fixed(kLeft) << "\" y=\"" << fixed(kTop) << "\" width=\""
      << fixed(plot_w) << "\" height=\"" << fixed(plot_h)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"" << fixed(kHeight - 14)
      << "\" text-anchor=\"middle\">" << escape(chart.x_label) << "</text>\n";
  svg << "<text transform=\"translate(18 " << fixed(kTop + plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(chart.y_label) << "</text>\n";

  std::size_t index = 0;
  for (const Band& b : chart.series) {
    const char* color = kPalette[index % std::size(kPalette)];
    if (!b.std.empty() && !b.x.empty()) {
      svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
      for (std::size_t i = 0; i < b.x.size(); ++i) {
        svg << fixed(px(b.x[i])) << ',' << fixed(py(b.mean[i] + b.std[i])) << ' ';
      }
      for (std::size_t i = b.x.size(); i-- > 0;) {
        svg << fixed(px(b.x[i])) << ',' << fixed(py(b.mean[i] - b.std[i])) << ' ';
      }
      svg << "\"/>\n";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\"";
    if (b.dashed) svg << " stroke-dasharray=\"6 4\"";
    svg << " points=\"";
    for (std::size_t i = 0; i < b.x.size(); ++i) {
      svg << fixed(px(b.x[i])) << ',' << fixed(py(b.mean[i])) << ' ';
    }
    svg << "\"/>\n";

    const double ly = kTop + 14.0 + 18.0 * static_cast<double>(index);
    const double lx = kLeft + plot_w + 12.0;
    svg << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(lx + 22)
        << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"";
    if (b.dashed) svg << " stroke-dasharray=\"6 4\"";
    svg << "/>\n";
    svg << "<text x=\"" << fixed(lx + 28) << "\" y=\"" << fixed(ly + 4) << "\">"
        << escape(b.label) << "</text>\n";
    ++index;
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::string> emit_plots(const std::vector<std::string>& inputs,
                                    const std::string& out_dir) {
  namespace fs = std::filesystem;
  if (inputs.empty()) throw SchemaError("no metrics files given");

  static const std::vector<std::string> required = {
      "mean_return", "sat_prop", "c_sat", "verify_c_sat",
      "return_sat",  "return_viol", "cost_sat", "cost_viol"};

  std::vector<Source> sources;
  for (const std::string& path : inputs) {
    Source src{load_csv_table(path), {}, false};
    src.aggregate = src.table.schema.rfind("snes-aggregate", 0) == 0;
    if (!src.aggregate && src.table.schema.rfind("snes-metrics", 0) != 0) {
      throw SchemaError(path + ": unsupported schema '" + src.table.schema + "'");
    }
    if (src.table.rows.empty()) throw SchemaError(path + ": no data rows");
    src.table.column("episodes");
    for (const std::string& metric : required) {
      src.table.column(src.aggregate ? metric + "_mean" : metric);
      if (src.aggregate) src.table.column(metric + "_std");
    }
    const fs::path p(path);
    src.label = src.aggregate && p.has_parent_path() ? p.parent_path().filename().string()
                                                     : p.stem().string();
    if (src.label.empty()) src.label = p.stem().string();
    sources.push_back(std::move(src));
  }

  struct Figure {
    std::string file, title, y_label;
    std::vector<std::pair<std::string, bool>> metrics;  // (column, dashed)
  };
  const std::vector<Figure> figures = {
      {"return.svg", "Episode return", "return", {{"mean_return", false}}},
      {"sat_prop.svg", "Proportion of episodes satisfying the requirement", "proportion",
       {{"sat_prop", false}}},
      {"c_sat.svg", "Training confidence c_sat", "c_sat", {{"c_sat", false}}},
      {"verify_c_sat.svg", "Verification confidence", "c_sat", {{"verify_c_sat", false}}},
      {"return_split.svg", "Return of satisfying (solid) and violating (dashed) episodes",
       "return", {{"return_sat", false}, {"return_viol", true}}},
      {"cost_split.svg", "Cost of satisfying (solid) and violating (dashed) episodes", "cost",
       {{"cost_sat", false}, {"cost_viol", true}}},
  };

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw ConfigError("cannot create plot directory '" + out_dir + "'");
  }
  std::vector<std::string> written;
  for (const Figure& fig : figures) {
    Chart chart{fig.title, "episodes", fig.y_label, {}};
    for (const Source& src : sources) {
      for (const auto& [metric, dashed] : fig.metrics) {
        const std::string label =
            fig.metrics.size() > 1 ? src.label + (dashed ? " (violating)" : " (satisfying)")
                                   : src.label;
        chart.series.push_back(band_for(src, metric, label, dashed));
      }
    }
    const std::string path = (fs::path(out_dir) / fig.file).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << render_svg(chart);
    written.push_back(path);
  }
  return written;
}

}  // namespace snes
