// Copyright 2026 The NavForge Authors
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

#include "svg.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "navforge/errors.h"

namespace navforge::cli {
namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 55;

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

struct Box {
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity();
  double y1 = -std::numeric_limits<double>::infinity();

  void add(double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  bool empty() const { return !(x0 <= x1); }
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

}  // namespace

const std::string& palette(size_t i) {
  static const std::array<std::string, 10> colors = {
      "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return colors[i % colors.size()];
}

SvgPlot::SvgPlot(std::string title, std::string xlabel, std::string ylabel)
    : title_(std::move(title)),
      xlabel_(std::move(xlabel)),
      ylabel_(std::move(ylabel)) {}

void SvgPlot::add_line(std::vector<double> xs, std::vector<double> ys,
                       const std::string& color, const std::string& label) {
  lines_.push_back({std::move(xs), std::move(ys), color, label});
}

void SvgPlot::add_circle(double x, double y, double r, const std::string& stroke,
                         const std::string& fill, bool dashed) {
  circles_.push_back({x, y, r, stroke, fill, dashed});
}

void SvgPlot::add_bar(double x, double width, double height,
                      const std::string& color) {
  bars_.push_back({x, width, height, color});
}

std::string SvgPlot::render() const {
  Box b;
  for (const auto& l : lines_) {
    for (size_t i = 0; i < std::min(l.xs.size(), l.ys.size()); ++i) {
      b.add(l.xs[i], l.ys[i]);
    }
  }
  for (const auto& c : circles_) {
    b.add(c.x - c.r, c.y - c.r);
    b.add(c.x + c.r, c.y + c.r);
  }
  for (const auto& r : bars_) {
    b.add(r.x, 0.0);
    b.add(r.x + r.width, r.height);
  }
  if (b.empty()) b = Box{0, 1, 0, 1};
  if (b.x1 - b.x0 < 1e-12) { b.x0 -= 0.5; b.x1 += 0.5; }
  if (b.y1 - b.y0 < 1e-12) { b.y0 -= 0.5; b.y1 += 0.5; }

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  double sx = pw / (b.x1 - b.x0), sy = ph / (b.y1 - b.y0);
  double ox = 0.0, oy = 0.0;
  if (equal_aspect_) {
    const double s = std::min(sx, sy);
    ox = (pw - s * (b.x1 - b.x0)) / 2;
    oy = (ph - s * (b.y1 - b.y0)) / 2;
    sx = sy = s;
  }
  const auto X = [&](double x) { return kLeft + ox + (x - b.x0) * sx; };
  const auto Y = [&](double y) { return kTop + ph - oy - (y - b.y0) * sy; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
    << kHeight << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
    << "font-family=\"sans-serif\" font-size=\"16\">" << escape(title_)
    << "</text>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
    << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";
  // Tick labels at the box corners are enough for static result plots.
  o << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  o << "<text x=\"" << kLeft << "\" y=\"" << kTop + ph + 16
    << "\" text-anchor=\"start\">" << num(b.x0 + (equal_aspect_ ? -ox / sx : 0))
    << "</text>\n";
  o << "<text x=\"" << kLeft + pw << "\" y=\"" << kTop + ph + 16
    << "\" text-anchor=\"end\">"
    << num(b.x0 + (pw - (equal_aspect_ ? ox : 0)) / sx) << "</text>\n";
  o << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + ph
    << "\" text-anchor=\"end\">" << num(b.y0 - (equal_aspect_ ? oy / sy : 0))
    << "</text>\n";
  o << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 10
    << "\" text-anchor=\"end\">"
    << num(b.y0 + (ph - (equal_aspect_ ? oy : 0)) / sy) << "</text>\n";
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15
    << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(xlabel_)
    << "</text>\n";
  o << "<text transform=\"translate(18," << kTop + ph / 2
    << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">"
    << escape(ylabel_) << "</text>\n</g>\n";

  for (const auto& r : bars_) {
    const double top = Y(std::max(r.height, 0.0));
    o << "<rect class=\"bar\" x=\"" << X(r.x) << "\" y=\"" << top
      << "\" width=\"" << r.width * sx << "\" height=\""
      << std::abs(Y(0.0) - Y(r.height)) << "\" fill=\"" << r.color << "\"/>\n";
  }
  for (const auto& c : circles_) {
    o << "<circle class=\"marker\" cx=\"" << X(c.x) << "\" cy=\"" << Y(c.y)
      << "\" r=\"" << std::max(2.0, c.r * sx) << "\" stroke=\"" << c.stroke
      << "\" fill=\"" << c.fill << "\"";
    if (c.dashed) o << " stroke-dasharray=\"6 4\"";
    o << "/>\n";
  }
  int legend = 0;
  for (const auto& l : lines_) {
    o << "<polyline class=\"path\" fill=\"none\" stroke-width=\"1.5\" stroke=\""
      << l.color << "\" points=\"";
    for (size_t i = 0; i < std::min(l.xs.size(), l.ys.size()); ++i) {
      if (!std::isfinite(l.xs[i]) || !std::isfinite(l.ys[i])) continue;
      o << X(l.xs[i]) << ',' << Y(l.ys[i]) << ' ';
    }
    o << "\"/>\n";
    if (!l.label.empty()) {
      const double ly = kTop + 14 + 14 * legend++;
      o << "<text x=\"" << kLeft + pw - 8 << "\" y=\"" << ly
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
        << "fill=\"" << l.color << "\">" << escape(l.label) << "</text>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

void SvgPlot::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << render();
  if (!out) throw ConfigError("failed writing " + path);
}

}  // namespace navforge::cli
