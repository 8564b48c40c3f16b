#include "fsgcc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fsgcc {

std::string fmt_g(double v, int precision) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMarginL = 70, kMarginR = 150, kMarginT = 40, kMarginB = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

struct Range {
  double lo = 0.0, hi = 1.0;
  void expand(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
};

std::string svg_header(const std::string& title) {
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
       "\" height=\"" + std::to_string(kHeight) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + std::to_string(kWidth / 2) +
       "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
       title + "</text>\n";
  return s;
}

}  // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<ChartSeries>& series) {
  Range xr{1e300, -1e300}, yr{1e300, -1e300};
  for (const auto& s : series) {
    for (double v : s.x) xr.expand(v);
    for (double v : s.y) yr.expand(v);
  }
  if (xr.lo > xr.hi) xr = {0.0, 1.0};
  if (yr.lo > yr.hi) yr = {0.0, 1.0};
  if (xr.hi == xr.lo) xr.hi = xr.lo + 1.0;
  if (yr.hi == yr.lo) yr.hi = yr.lo + 1.0;

  const double plot_w = kWidth - kMarginL - kMarginR;
  const double plot_h = kHeight - kMarginT - kMarginB;
  const auto px = [&](double v) { return kMarginL + (v - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  const auto py = [&](double v) {
    return kMarginT + plot_h - (v - yr.lo) / (yr.hi - yr.lo) * plot_h;
  };

  std::string s = svg_header(title);
  s += "<rect x=\"" + std::to_string(kMarginL) + "\" y=\"" + std::to_string(kMarginT) +
       "\" width=\"" + fmt_g(plot_w) + "\" height=\"" + fmt_g(plot_h) +
       "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int t = 0; t <= 4; ++t) {
    const double xv = xr.lo + t * (xr.hi - xr.lo) / 4.0;
    const double yv = yr.lo + t * (yr.hi - yr.lo) / 4.0;
    s += "<text x=\"" + fmt_g(px(xv)) + "\" y=\"" + std::to_string(kHeight - kMarginB + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
         fmt_g(xv, 4) + "</text>\n";
    s += "<text x=\"" + std::to_string(kMarginL - 8) + "\" y=\"" + fmt_g(py(yv) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
         fmt_g(yv, 4) + "</text>\n";
    s += "<line x1=\"" + std::to_string(kMarginL) + "\" y1=\"" + fmt_g(py(yv)) + "\" x2=\"" +
         fmt_g(kMarginL + plot_w) + "\" y2=\"" + fmt_g(py(yv)) +
         "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
  }
  s += "<text x=\"" + fmt_g(kMarginL + plot_w / 2) + "\" y=\"" +
       std::to_string(kHeight - 10) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + x_label +
       "</text>\n";
  s += "<text x=\"16\" y=\"" + fmt_g(kMarginT + plot_h / 2) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 " +
       fmt_g(kMarginT + plot_h / 2) + ")\">" + y_label + "</text>\n";

  int color = 0;
  for (const auto& ser : series) {
    const char* stroke = kPalette[color % 8];
    std::string points;
    for (size_t i = 0; i < ser.x.size() && i < ser.y.size(); ++i) {
      if (!std::isfinite(ser.y[i])) continue;
      points += fmt_g(px(ser.x[i])) + "," + fmt_g(py(ser.y[i])) + " ";
    }
    s += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) +
         "\" stroke-width=\"1.8\" points=\"" + points + "\"/>\n";
    for (size_t i = 0; i < ser.x.size() && i < ser.y.size(); ++i) {
      if (!std::isfinite(ser.y[i])) continue;
      s += "<circle cx=\"" + fmt_g(px(ser.x[i])) + "\" cy=\"" + fmt_g(py(ser.y[i])) +
           "\" r=\"3\" fill=\"" + stroke + "\"/>\n";
    }
    const double ly = kMarginT + 16 + color * 18;
    s += "<line x1=\"" + fmt_g(kMarginL + plot_w + 10) + "\" y1=\"" + fmt_g(ly) + "\" x2=\"" +
         fmt_g(kMarginL + plot_w + 34) + "\" y2=\"" + fmt_g(ly) + "\" stroke=\"" + stroke +
         "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + fmt_g(kMarginL + plot_w + 40) + "\" y=\"" + fmt_g(ly + 4) +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + ser.label + "</text>\n";
    ++color;
  }
  s += "</svg>\n";
  return s;
}

std::string heatmap_svg(const std::string& title, const Eigen::MatrixXd& values,
                        const std::string& x_label, const std::string& y_label) {
  // Pool rows so huge lag axes stay renderable.
  Eigen::MatrixXd m = values;
  const int max_rows = 512;
  if (m.rows() > max_rows) {
    const int stride = static_cast<int>((m.rows() + max_rows - 1) / max_rows);
    Eigen::MatrixXd pooled((m.rows() + stride - 1) / stride, m.cols());
    for (int r = 0; r < pooled.rows(); ++r) {
      for (int c = 0; c < pooled.cols(); ++c) {
        double best = 0.0;
        for (int k = r * stride; k < std::min<int>(m.rows(), (r + 1) * stride); ++k)
          if (std::abs(m(k, c)) > std::abs(best)) best = m(k, c);
        pooled(r, c) = best;
      }
    }
    m = pooled;
  }

  const double vmax = std::max(1e-300, m.cwiseAbs().maxCoeff());
  const double plot_w = kWidth - kMarginL - 60;
  const double plot_h = kHeight - kMarginT - kMarginB;
  const double cw = plot_w / m.cols();
  const double ch = plot_h / m.rows();

  std::string s = svg_header(title);
  char buf[160];
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      const double t = m(r, c) / vmax;  // [-1, 1]
      // blue (negative) -> white -> red (positive)
      const int red = static_cast<int>(255 * std::min(1.0, 1.0 + std::min(t, 0.0)));
      const int blue = static_cast<int>(255 * std::min(1.0, 1.0 - std::max(t, 0.0)));
      const int green = std::min(red, blue);
      std::snprintf(buf, sizeof(buf),
                    "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                    "fill=\"rgb(%d,%d,%d)\"/>\n",
                    kMarginL + c * cw, kMarginT + r * ch, cw + 0.5, ch + 0.5, red, green, blue);
      s += buf;
    }
  }
  s += "<rect x=\"" + std::to_string(kMarginL) + "\" y=\"" + std::to_string(kMarginT) +
       "\" width=\"" + fmt_g(plot_w) + "\" height=\"" + fmt_g(plot_h) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<text x=\"" + fmt_g(kMarginL + plot_w / 2) + "\" y=\"" + std::to_string(kHeight - 10) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + x_label +
       "</text>\n";
  s += "<text x=\"16\" y=\"" + fmt_g(kMarginT + plot_h / 2) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 " +
       fmt_g(kMarginT + plot_h / 2) + ")\">" + y_label + "</text>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace fsgcc
