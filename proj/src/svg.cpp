#include "tvvecm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "tvvecm/csv.hpp"
#include "tvvecm/errors.hpp"

namespace tvvecm {

namespace {

constexpr double kWidth = 900.0;
constexpr double kPanelLeft = 60.0;
constexpr double kPanelRight = 880.0;
constexpr double kTopPanelTop = 40.0;
constexpr double kTopPanelBottom = 320.0;
constexpr double kBottomPanelTop = 360.0;
constexpr double kBottomPanelBottom = 500.0;
constexpr double kHeight = 540.0;

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  double top = 0.0;
  double bottom = 1.0;

  [[nodiscard]] double y(double v) const {
    return bottom - (v - lo) / (hi - lo) * (bottom - top);
  }
};

Axis make_axis(double lo, double hi, double top, double bottom) {
  if (!(hi > lo)) {
    const double pad = std::max(1e-6, std::abs(lo) * 0.05);
    lo -= pad;
    hi += pad;
  } else {
    const double pad = (hi - lo) * 0.05;
    lo -= pad;
    hi += pad;
  }
  return Axis{lo, hi, top, bottom};
}

double x_at(Eigen::Index t, Eigen::Index total) {
  if (total <= 1) return kPanelLeft;
  return kPanelLeft + static_cast<double>(t) / static_cast<double>(total - 1) *
                          (kPanelRight - kPanelLeft);
}

std::string polyline(const Eigen::VectorXd& values, const Axis& axis,
                     const std::string& stroke, double stroke_width) {
  std::string d;
  for (Eigen::Index t = 0; t < values.size(); ++t) {
    d += (t == 0 ? "M" : " L");
    d += coord(x_at(t, values.size())) + "," + coord(axis.y(values[t]));
  }
  return "  <path d=\"" + d + "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
         coord(stroke_width) + "\"/>\n";
}

void axis_frame(std::string& svg, const Axis& axis, const std::string& label) {
  svg += "  <rect x=\"" + coord(kPanelLeft) + "\" y=\"" + coord(axis.top) + "\" width=\"" +
         coord(kPanelRight - kPanelLeft) + "\" height=\"" + coord(axis.bottom - axis.top) +
         "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = axis.lo + (axis.hi - axis.lo) * i / 4.0;
    const double y = axis.y(v);
    svg += "  <line x1=\"" + coord(kPanelLeft - 4) + "\" y1=\"" + coord(y) + "\" x2=\"" +
           coord(kPanelLeft) + "\" y2=\"" + coord(y) +
           "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    svg += "  <text x=\"" + coord(kPanelLeft - 8) + "\" y=\"" + coord(y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
           format_number(std::round(v * 1000.0) / 1000.0) + "</text>\n";
  }
  svg += "  <text x=\"" + coord(kPanelLeft) + "\" y=\"" + coord(axis.top - 8) +
         "\" font-family=\"sans-serif\" font-size=\"13\">" + label + "</text>\n";
}

void month_ticks(std::string& svg, const YearMonth& first, Eigen::Index total,
                 double panel_bottom) {
  if (total < 2) return;
  // at most eight roughly evenly spaced year labels
  const int step = std::max<int>(1, static_cast<int>((total + 7) / 8));
  for (Eigen::Index t = 0; t < total; t += step) {
    const double x = x_at(t, total);
    svg += "  <line x1=\"" + coord(x) + "\" y1=\"" + coord(panel_bottom) + "\" x2=\"" +
           coord(x) + "\" y2=\"" + coord(panel_bottom + 4) +
           "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    svg += "  <text x=\"" + coord(x) + "\" y=\"" + coord(panel_bottom + 16) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
           format_year_month(first.plus_months(static_cast<int>(t))) + "</text>\n";
  }
}

}  // namespace

std::string render_speed_svg(const IntegrationSpeedPath& path, const std::string& title) {
  const auto total = path.zeta.size();
  if (total < 2) throw InsufficientDataError("need at least two periods to draw");
  const bool has_bands =
      path.lower.size() == total && path.upper.size() == total && path.coverage > 0.0;

  double lo = path.zeta.minCoeff();
  double hi = path.zeta.maxCoeff();
  if (has_bands) {
    lo = std::min(lo, path.lower.minCoeff());
    hi = std::max(hi, path.upper.maxCoeff());
  }
  const Axis top_axis = make_axis(lo, hi, kTopPanelTop, kTopPanelBottom);

  const Eigen::VectorXd& accel = path.acceleration;
  const Axis bottom_axis = make_axis(std::min(accel.minCoeff(), 0.0),
                                     std::max(accel.maxCoeff(), 0.0), kBottomPanelTop,
                                     kBottomPanelBottom);

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + coord(kWidth) +
         "\" height=\"" + coord(kHeight) + "\" viewBox=\"0 0 " + coord(kWidth) + " " +
         coord(kHeight) + "\">\n";
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg += "  <text x=\"" + coord(kWidth / 2) +
         "\" y=\"22\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">" +
         title + "</text>\n";

  if (has_bands) {
    std::string d;
    for (Eigen::Index t = 0; t < total; ++t) {
      d += (t == 0 ? "M" : " L");
      d += coord(x_at(t, total)) + "," + coord(top_axis.y(path.upper[t]));
    }
    for (Eigen::Index t = total; t-- > 0;) {
      d += " L" + coord(x_at(t, total)) + "," + coord(top_axis.y(path.lower[t]));
    }
    d += " Z";
    svg += "  <path d=\"" + d + "\" fill=\"#9ecae1\" fill-opacity=\"0.5\" stroke=\"none\"/>\n";
  }
  svg += polyline(path.zeta, top_axis, "#08519c", 1.5);
  axis_frame(svg, top_axis, "level");
  month_ticks(svg, path.first_month, total, kTopPanelBottom);

  const double zero_y = bottom_axis.y(0.0);
  svg += "  <line x1=\"" + coord(kPanelLeft) + "\" y1=\"" + coord(zero_y) + "\" x2=\"" +
         coord(kPanelRight) + "\" y2=\"" + coord(zero_y) +
         "\" stroke=\"#bbbbbb\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
  svg += polyline(accel, bottom_axis, "#a63603", 1.0);
  axis_frame(svg, bottom_axis, "first difference");
  month_ticks(svg, path.first_month.plus_months(1), total - 1, kBottomPanelBottom);

  svg += "</svg>\n";
  return svg;
}

void write_speed_svg_file(const IntegrationSpeedPath& path, const std::string& file,
                          const std::string& title) {
  write_file(file, render_speed_svg(path, title));
}

}  // namespace tvvecm
