// Copyright 2026 The iaside Authors.
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

#include "iaside/plots.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "iaside/atomic_file.hpp"
#include "iaside/error.hpp"

namespace iaside {
namespace {

constexpr double kWidth = 480;
constexpr double kHeight = 320;
constexpr double kLeft = 56;
constexpr double kRight = 16;
constexpr double kTop = 32;
constexpr double kBottom = 56;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

std::string header(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
         fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         "<text x=\"" + fmt(kWidth / 2) + "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">" +
         escape(title) + "</text>\n";
}

std::string axes() {
  const double x0 = kLeft, y0 = kHeight - kBottom, x1 = kWidth - kRight;
  return "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x1) + "\" y2=\"" +
         fmt(y0) + "\" stroke=\"black\"/>\n<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(kTop) +
         "\" x2=\"" + fmt(x0) + "\" y2=\"" + fmt(y0) + "\" stroke=\"black\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle") {
  return "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" text-anchor=\"" + anchor + "\">" +
         escape(s) + "</text>\n";
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

}  // namespace

std::string sid_bar_chart(const SpectralImportance& sid, const std::string& title) {
  const auto& v = sid.normalized;
  if (v.empty()) throw ConfigurationError("SID is empty; nothing to plot");
  const double top = std::max(*std::max_element(v.begin(), v.end()), 1e-12);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double slot = plot_w / static_cast<double>(v.size());
  std::string svg = header(title) + axes();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double h = plot_h * std::max(v[i], 0.0) / top;
    const double x = kLeft + slot * static_cast<double>(i) + slot * 0.15;
    svg += "<rect class=\"bar\" x=\"" + fmt(x) + "\" y=\"" + fmt(kHeight - kBottom - h) +
           "\" width=\"" + fmt(slot * 0.7) + "\" height=\"" + fmt(h) +
           "\" fill=\"steelblue\"><title>band " + std::to_string(i) + ": " + fmt(v[i]) +
           "</title></rect>\n";
    svg += text(x + slot * 0.35, kHeight - kBottom + 14, std::to_string(i));
  }
  svg += text(kLeft - 6, kTop + 4, fmt(top), "end");
  svg += text(kLeft - 6, kHeight - kBottom + 4, "0", "end");
  svg += text(kLeft + plot_w / 2, kHeight - 18, "band (low to high frequency)");
  svg += "</svg>\n";
  return svg;
}

std::string srs_mpe_scatter(std::span<const RobustnessRecord> records,
                            const std::string& perturbation, const Correlation& corr) {
  if (records.empty()) throw ConfigurationError("no records to plot");
  std::vector<double> xs, ys;
  for (const auto& r : records) {
    auto it = r.mpe.find(perturbation);
    if (it == r.mpe.end() || std::isnan(r.srs)) {
      throw ConfigurationError("record " + r.model_id + " lacks SRS or mPE for " + perturbation);
    }
    xs.push_back(r.srs);
    ys.push_back(it->second);
  }
  auto range = [](const std::vector<double>& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    double a = *lo, b = *hi;
    if (b - a < 1e-12) {
      a -= 0.5;
      b += 0.5;
    }
    const double pad = 0.05 * (b - a);
    return std::pair{a - pad, b + pad};
  };
  const auto [x0, x1] = range(xs);
  const auto [y0, y1] = range(ys);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  std::string svg = header("SRS vs mPE (" + perturbation + ")") + axes();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double px = kLeft + plot_w * (xs[i] - x0) / (x1 - x0);
    const double py = kHeight - kBottom - plot_h * (ys[i] - y0) / (y1 - y0);
    svg += "<circle class=\"point\" cx=\"" + fmt(px) + "\" cy=\"" + fmt(py) +
           "\" r=\"4\" fill=\"darkorange\"><title>" + escape(records[i].model_id) + "</title></circle>\n";
  }
  svg += text(kLeft, kHeight - kBottom + 14, fmt(x0), "start");
  svg += text(kWidth - kRight, kHeight - kBottom + 14, fmt(x1), "end");
  svg += text(kLeft - 6, kHeight - kBottom, fmt(y0), "end");
  svg += text(kLeft - 6, kTop + 4, fmt(y1), "end");
  svg += text(kLeft + plot_w / 2, kHeight - 30, "SRS");
  svg += "<text class=\"caption\" x=\"" + fmt(kLeft + plot_w / 2) + "\" y=\"" + fmt(kHeight - 12) +
         "\" text-anchor=\"middle\">n = " + std::to_string(corr.n) + ", Spearman = " +
         fmt(corr.spearman) + ", Pearson = " + fmt(corr.pearson) + "</text>\n";
  svg += "<text x=\"14\" y=\"" + fmt(kTop + plot_h / 2) + "\" transform=\"rotate(-90 14 " +
         fmt(kTop + plot_h / 2) + ")\" text-anchor=\"middle\">mPE</text>\n";
  svg += "</svg>\n";
  return svg;
}

std::vector<std::filesystem::path> emit_plots(const ResultsDocument& doc,
                                              const std::filesystem::path& dir) {
  if (doc.records && doc.records->empty()) {
    throw ConfigurationError("results document has an empty record list");
  }
  const bool record_sids =
      doc.records && std::any_of(doc.records->begin(), doc.records->end(),
                                 [](const RobustnessRecord& r) { return !r.sid.normalized.empty(); });
  if (!doc.sid && !record_sids && doc.correlations.empty()) {
    throw ConfigurationError("results document has no SID or correlation section to plot");
  }
  std::vector<std::filesystem::path> out;
  if (doc.sid) {
    const auto path = dir / "sid.svg";
    write_file_atomic(path, sid_bar_chart(*doc.sid, "Spectral importance: " + doc.config.model));
    out.push_back(path);
  } else if (record_sids) {
    for (const auto& r : *doc.records) {
      if (r.sid.normalized.empty()) continue;
      const auto path = dir / ("sid_" + sanitize(r.model_id) + ".svg");
      write_file_atomic(path, sid_bar_chart(r.sid, "Spectral importance: " + r.model_id));
      out.push_back(path);
    }
  }
  if (!doc.correlations.empty()) {
    if (!doc.records) throw ConfigurationError("correlations present without records");
    for (const auto& [id, corr] : doc.correlations) {
      const auto path = dir / ("scatter_" + sanitize(id) + ".svg");
      write_file_atomic(path, srs_mpe_scatter(*doc.records, id, corr));
      out.push_back(path);
    }
  }
  return out;
}

}  // namespace iaside
