#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace fsgcc {

/// Shortest round-trippable decimal formatting ("%.17g" is overkill for
/// reports; 9 digits keeps CSVs readable and stable).
std::string fmt_g(double v, int precision = 9);

void write_text_file(const std::string& path, const std::string& content);

struct ChartSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained SVG line chart with axes, tick labels and a legend.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<ChartSeries>& series);

/// Self-contained SVG heatmap of a row-major matrix. Rows above ~512 are
/// max-abs pooled so matrix dumps stay viewable.
std::string heatmap_svg(const std::string& title, const Eigen::MatrixXd& values,
                        const std::string& x_label, const std::string& y_label);

}  // namespace fsgcc
