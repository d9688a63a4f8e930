// Copyright 2026 The qspectro Authors
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

// Text serialisation of spectra and response grids: CSV, JSON and SVG plots.
// Number formatting is fixed so identical data always produce identical bytes.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "qspectro/response.hpp"
#include "qspectro/spectra.hpp"

namespace qspectro {

namespace detail {

inline std::string num(double v) {
  if (v == 0.0) v = 0.0;  // fold -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error("failed writing " + path);
}

}  // namespace detail

/// Writes `text` to `path` byte for byte, throwing Error on failure.
inline void write_text_file(const std::string& path, const std::string& text) { detail::write_file(path, text); }

/// One row per sample: axis values..., real, imag.
inline std::string to_csv(const Spectrum& s) {
  std::ostringstream out;
  for (const auto& a : s.axes) out << a.name << ',';
  out << "real,imag\n";
  std::vector<size_t> idx(s.axes.size(), 0);
  for (size_t flat = 0; flat < s.values.size(); ++flat) {
    size_t rest = flat;
    for (size_t a = s.axes.size(); a-- > 0;) {
      idx[a] = rest % s.axes[a].count;
      rest /= s.axes[a].count;
    }
    for (size_t a = 0; a < s.axes.size(); ++a) out << detail::num(s.axes[a].value(idx[a])) << ',';
    out << detail::num(s.values[flat].real()) << ',' << detail::num(s.values[flat].imag()) << '\n';
  }
  return out.str();
}

inline nlohmann::ordered_json to_json(const Spectrum& s) {
  nlohmann::ordered_json j;
  j["kind"] = "spectrum";
  j["real_valued"] = s.real_valued;
  nlohmann::ordered_json axes = nlohmann::ordered_json::array();
  for (const auto& a : s.axes) {
    nlohmann::ordered_json ax;
    ax["name"] = a.name;
    ax["step"] = a.step;
    ax["first_index"] = a.first;
    ax["count"] = a.count;
    axes.push_back(ax);
  }
  j["axes"] = std::move(axes);
  nlohmann::ordered_json re = nlohmann::ordered_json::array(), im = nlohmann::ordered_json::array();
  for (const auto& v : s.values) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  j["real"] = std::move(re);
  j["imag"] = std::move(im);
  return j;
}

inline std::string to_csv(const ResponseGrid& r) {
  std::ostringstream out;
  for (const auto& a : r.axes) out << a.label << ',';
  out << "real,imag\n";
  for (size_t flat = 0; flat < r.values.size(); ++flat) {
    const auto idx = r.unflatten(flat);
    for (size_t a = 0; a < r.axes.size(); ++a) out << detail::num(r.axes[a].value(idx[a])) << ',';
    out << detail::num(r.values[flat].real()) << ',' << detail::num(r.values[flat].imag()) << '\n';
  }
  return out.str();
}

inline nlohmann::ordered_json to_json(const ResponseGrid& r) {
  nlohmann::ordered_json j;
  j["kind"] = "response";
  j["order"] = r.order;
  j["exact"] = r.exact;
  nlohmann::ordered_json axes = nlohmann::ordered_json::array();
  for (const auto& a : r.axes) {
    nlohmann::ordered_json ax;
    ax["label"] = a.label;
    ax["scanned"] = a.scanned;
    if (a.scanned) {
      ax["step"] = a.step;
      ax["count"] = a.count;
    } else {
      ax["value"] = a.fixed;
    }
    axes.push_back(ax);
  }
  j["axes"] = std::move(axes);
  nlohmann::ordered_json re = nlohmann::ordered_json::array(), im = nlohmann::ordered_json::array();
  for (const auto& v : r.values) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  j["real"] = std::move(re);
  j["imag"] = std::move(im);
  return j;
}

/// Line plot (1D, real part solid and imaginary part dashed unless real valued) or
/// heat map of |S| (2D).
inline std::string to_svg(const Spectrum& s, const std::string& title = "") {
  constexpr double W = 640, H = 400, L = 70, R = 20, T = 30, B = 50;
  const double pw = W - L - R, ph = H - T - B;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) out << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (s.axes.empty() || s.values.empty()) {
    out << "</svg>\n";
    return out.str();
  }
  const auto& ax = s.axes[0];
  const double x0 = ax.value(0), x1 = ax.value(ax.count - 1);
  auto px = [&](double x) { return L + (x1 > x0 ? (x - x0) / (x1 - x0) : 0.5) * pw; };
  out << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\" font-size=\"12\">" << ax.name
      << "</text>\n";
  out << "<text x=\"" << L << "\" y=\"" << H - B + 16 << "\" font-size=\"10\">" << detail::num(x0) << "</text>\n";
  out << "<text x=\"" << L + pw << "\" y=\"" << H - B + 16 << "\" text-anchor=\"end\" font-size=\"10\">"
      << detail::num(x1) << "</text>\n";

  if (s.axes.size() == 1) {
    double lo = 0.0, hi = 0.0;
    for (const auto& v : s.values) {
      lo = std::min({lo, v.real(), s.real_valued ? 0.0 : v.imag()});
      hi = std::max({hi, v.real(), s.real_valued ? 0.0 : v.imag()});
    }
    if (hi == lo) hi = lo + 1.0;
    auto py = [&](double y) { return T + (hi - y) / (hi - lo) * ph; };
    auto polyline = [&](auto part, const char* style) {
      out << "<polyline fill=\"none\" " << style << " points=\"";
      for (size_t k = 0; k < s.values.size(); ++k)
        out << detail::num(px(ax.value(k))) << ',' << detail::num(py(part(s.values[k]))) << ' ';
      out << "\"/>\n";
    };
    polyline([](Complex v) { return v.real(); }, "stroke=\"#1f4e9c\" stroke-width=\"1.5\"");
    if (!s.real_valued) polyline([](Complex v) { return v.imag(); }, "stroke=\"#c0392b\" stroke-dasharray=\"4 3\"");
    out << "<text x=\"15\" y=\"" << T + ph / 2 << "\" font-size=\"12\" transform=\"rotate(-90 15 " << T + ph / 2
        << ")\" text-anchor=\"middle\">signal (arb. units)</text>\n";
  } else {
    const auto& ay = s.axes[1];
    const double y0 = ay.value(0), y1 = ay.value(ay.count - 1);
    double peak = 0.0;
    for (const auto& v : s.values) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) peak = 1.0;
    const double cw = pw / static_cast<double>(ax.count), ch = ph / static_cast<double>(ay.count);
    for (size_t i = 0; i < ax.count; ++i) {
      for (size_t k = 0; k < ay.count; ++k) {
        const double level = std::abs(s.values[i * ay.count + k]) / peak;
        const int shade = 255 - static_cast<int>(std::lround(255.0 * level));
        out << "<rect x=\"" << detail::num(L + static_cast<double>(i) * cw) << "\" y=\""
            << detail::num(T + ph - static_cast<double>(k + 1) * ch) << "\" width=\"" << detail::num(cw)
            << "\" height=\"" << detail::num(ch) << "\" fill=\"rgb(" << shade << ',' << shade << ",255)\"/>\n";
      }
    }
    out << "<text x=\"15\" y=\"" << T + ph / 2 << "\" font-size=\"12\" transform=\"rotate(-90 15 " << T + ph / 2
        << ")\" text-anchor=\"middle\">" << ay.name << "</text>\n";
    out << "<text x=\"" << L - 4 << "\" y=\"" << T + ph << "\" text-anchor=\"end\" font-size=\"10\">"
        << detail::num(y0) << "</text>\n";
    out << "<text x=\"" << L - 4 << "\" y=\"" << T + 10 << "\" text-anchor=\"end\" font-size=\"10\">"
        << detail::num(y1) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace qspectro
