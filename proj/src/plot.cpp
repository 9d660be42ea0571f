// Copyright 2026 The mmic Authors.
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

#include "mmic/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace mmic {

const std::vector<std::string> kPlotPanels = {"a_h.svg", "a_p.svg",   "a_f.svg", "k_d1.svg",
                                              "x_tilde.svg", "x_d.svg", "f_z.svg"};

namespace {

struct Table {
  std::vector<double> t;
  std::vector<std::string> mode;
  std::map<std::string, std::vector<double>> cols;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PlotError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw PlotError(path.string() + ": empty file");
  const auto header = split(line);
  const std::vector<std::string> needed = {"t",   "mode", "a_h",  "a_p",  "a_f",  "kd1", "xt1",
                                           "xt2", "xt3",  "xd_x", "xd_y", "xd_z", "f_z"};
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index[header[i]] = i;
  for (const auto& k : needed) {
    if (!index.count(k)) throw PlotError(path.string() + ": missing column '" + k + "'");
  }
  Table tab;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw PlotError(path.string() + ":" + std::to_string(lineno) + ": wrong column count");
    }
    for (const auto& k : needed) {
      const std::string& c = cells[index[k]];
      if (k == "mode") {
        tab.mode.push_back(c);
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (c.empty() || end != c.c_str() + c.size()) {
        throw PlotError(path.string() + ":" + std::to_string(lineno) + ": bad number in '" + k + "'");
      }
      if (k == "t") tab.t.push_back(v);
      else tab.cols[k].push_back(v);
    }
  }
  if (tab.t.empty()) throw PlotError(path.string() + ": no data rows");
  return tab;
}

const char* mode_color(const std::string& mode) {
  if (mode == "waiting") return "#b6e3b6";
  if (mode == "recovery") return "#f5e79e";
  if (mode == "scanning") return "#f2b0b0";
  if (mode == "human_guided") return "#aecbf0";
  return "#dddddd";
}

struct Series {
  std::string label;
  std::vector<double> y;
  const char* color;
};

void write_panel(const std::filesystem::path& file, const std::string& title, const Table& tab,
                 const std::vector<Series>& series) {
  constexpr double W = 900.0, H = 220.0, L = 70.0, R = 20.0, T = 30.0, B = 35.0;
  const double t0 = tab.t.front();
  const double t1 = std::max(tab.t.back(), t0 + 1e-9);
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : series) {
    for (double v : s.y) {
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  auto X = [&](double t) { return L + (t - t0) / (t1 - t0) * (W - L - R); };
  auto Y = [&](double v) { return T + (hi - v) / (hi - lo) * (H - T - B); };

  std::ofstream out(file);
  if (!out) throw PlotError("cannot write " + file.string());
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Mode bands.
  std::size_t i = 0;
  while (i < tab.t.size()) {
    std::size_t j = i;
    while (j + 1 < tab.t.size() && tab.mode[j + 1] == tab.mode[i]) ++j;
    const double xa = X(tab.t[i]);
    const double xb = j + 1 < tab.t.size() ? X(tab.t[j + 1]) : X(t1);
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"%s\"/>\n", xa,
                  T, std::max(xb - xa, 0.5), H - T - B, mode_color(tab.mode[i]));
    out << buf;
    i = j + 1;
  }
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" "
                "stroke=\"black\"/>\n",
                L, T, W - L - R, H - T - B);
  out << buf;
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">%.4g</text>\n", L - 4, Y(v) + 4, v);
    out << buf;
    const double tv = t0 + (t1 - t0) * k / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%.4g</text>\n", X(tv), H - B + 15,
                  tv);
    out << buf;
  }
  out << "<text x=\"" << L << "\" y=\"18\" font-weight=\"bold\">" << title << "</text>\n";
  out << "<text x=\"" << W - R << "\" y=\"" << H - 4 << "\" text-anchor=\"end\">t [s]</text>\n";
  double legend_x = L + 200.0;
  for (const auto& s : series) {
    std::string pts;
    // Decimate to at most ~4 points per horizontal pixel.
    const std::size_t stride = std::max<std::size_t>(1, s.y.size() / 3000);
    for (std::size_t k = 0; k < s.y.size(); k += stride) {
      if (!std::isfinite(s.y[k])) continue;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", X(tab.t[k]), Y(s.y[k]));
      pts += buf;
    }
    if (s.y.size() == 1) {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2\" fill=\"%s\"/>\n",
                    X(tab.t[0]), Y(s.y[0]), s.color);
      out << buf;
    }
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\""
        << pts << "\"/>\n";
    out << "<text x=\"" << legend_x << "\" y=\"18\" fill=\"" << s.color << "\">" << s.label
        << "</text>\n";
    legend_x += 80.0;
  }
  out << "</svg>\n";
}

}  // namespace

std::vector<std::filesystem::path> plot_run(const std::filesystem::path& run_csv,
                                            const std::filesystem::path& out_dir) {
  const Table tab = read_csv(run_csv);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw PlotError("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<double> err(tab.t.size());
  for (std::size_t k = 0; k < err.size(); ++k) {
    err[k] = std::sqrt(std::pow(tab.cols.at("xt1")[k], 2) + std::pow(tab.cols.at("xt2")[k], 2) +
                       std::pow(tab.cols.at("xt3")[k], 2));
  }
  const char* c0 = "#1f3b73";
  const std::vector<std::pair<std::string, std::vector<Series>>> panels = {
      {"a_h", {{"a_h", tab.cols.at("a_h"), c0}}},
      {"a_p", {{"a_p", tab.cols.at("a_p"), c0}}},
      {"a_f", {{"a_f", tab.cols.at("a_f"), c0}}},
      {"k_d1 [N/m]", {{"k_d1", tab.cols.at("kd1"), c0}}},
      {"||x~|| [m]", {{"||x~||", err, c0}}},
      {"x_d [m]",
       {{"x", tab.cols.at("xd_x"), "#c0392b"},
        {"y", tab.cols.at("xd_y"), "#27ae60"},
        {"z", tab.cols.at("xd_z"), "#2c3e50"}}},
      {"f_z in {E} [N]", {{"f_z", tab.cols.at("f_z"), c0}}},
  };
  std::vector<std::filesystem::path> written;
  for (std::size_t k = 0; k < panels.size(); ++k) {
    const auto file = out_dir / kPlotPanels[k];
    write_panel(file, panels[k].first, tab, panels[k].second);
    written.push_back(file);
  }
  return written;
}

}  // namespace mmic
