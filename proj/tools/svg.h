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

#ifndef NAVFORGE_TOOLS_SVG_H_
#define NAVFORGE_TOOLS_SVG_H_

#include <string>
#include <vector>

namespace navforge::cli {

// Distinct colors for overlaid series; cycles after ten.
const std::string& palette(size_t i);

// Minimal static plot: polylines, markers, circles and bars on linear axes.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string xlabel, std::string ylabel);

  // Same scale on both axes (path plots).
  void set_equal_aspect(bool on) { equal_aspect_ = on; }

  void add_line(std::vector<double> xs, std::vector<double> ys,
                const std::string& color, const std::string& label = "");
  void add_circle(double x, double y, double r, const std::string& stroke,
                  const std::string& fill = "none", bool dashed = false);
  void add_bar(double x, double width, double height, const std::string& color);

  std::string render() const;
  // Throws ConfigError when the file cannot be written.
  void write(const std::string& path) const;

 private:
  struct Line {
    std::vector<double> xs, ys;
    std::string color, label;
  };
  struct Circle {
    double x, y, r;
    std::string stroke, fill;
    bool dashed;
  };
  struct Bar {
    double x, width, height;
    std::string color;
  };

  std::string title_, xlabel_, ylabel_;
  bool equal_aspect_ = false;
  std::vector<Line> lines_;
  std::vector<Circle> circles_;
  std::vector<Bar> bars_;
};

}  // namespace navforge::cli

#endif  // NAVFORGE_TOOLS_SVG_H_
