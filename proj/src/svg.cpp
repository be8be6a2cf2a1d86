#include "fpnet/svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>

#include "fpnet/errors.hpp"

namespace fpnet {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 50;

const std::array<const char*, 10> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fixed(double v, int digits = 2) {
  std::array<char, 64> buf;
  if (v == 0) v = 0;  // no "-0.00"
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, digits);
  return std::string(buf.data(), res.ptr);
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

struct Points {
  std::vector<double> x, y;
};

Points collect(const ExperimentReport& report, const PlotSeries& s) {
  const std::size_t cx = report.column(s.x), cy = report.column(s.y);
  const std::size_t cf = s.filter_column.empty() ? 0 : report.column(s.filter_column);
  Points p;
  for (const auto& row : report.rows) {
    if (!s.filter_column.empty() && row[cf] != s.filter_value) continue;
    const auto x = ExperimentReport::number(row[cx]);
    const auto y = ExperimentReport::number(row[cy]);
    if (x && y && std::isfinite(*x) && std::isfinite(*y)) {
      p.x.push_back(*x);
      p.y.push_back(*y);
    }
  }
  return p;
}

double nice_step(double span) {
  if (!(span > 0)) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

struct Range {
  double lo, hi;
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double d = std::max(1.0, std::abs(lo)) * 0.5;
    return {lo - d, hi + d};
  }
  const double step = nice_step(hi - lo);
  return {std::floor(lo / step) * step, std::ceil(hi / step) * step};
}

int tick_digits(double step) { return step >= 1 ? 0 : std::min(6, static_cast<int>(std::ceil(-std::log10(step)))); }

void legend(std::string& svg, const std::vector<std::string>& labels, bool lines) {
  double y = kTop + 10;
  const double x = kWidth - kRight + 15;
  for (std::size_t k = 0; k < labels.size(); ++k, y += 18) {
    const char* color = kPalette[k % kPalette.size()];
    if (lines) {
      svg += "<line x1=\"" + fixed(x) + "\" y1=\"" + fixed(y) + "\" x2=\"" + fixed(x + 16) + "\" y2=\"" + fixed(y) +
             "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    } else {
      svg += "<circle cx=\"" + fixed(x + 8) + "\" cy=\"" + fixed(y) + "\" r=\"4\" fill=\"" + color + "\"/>\n";
    }
    svg += "<text x=\"" + fixed(x + 22) + "\" y=\"" + fixed(y + 4) + "\" font-size=\"11\">" + escape(labels[k]) +
           "</text>\n";
  }
}

std::string header(const PlotSpec& plot) {
  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth, 0) + "\" height=\"" +
         fixed(kHeight, 0) + "\" viewBox=\"0 0 " + fixed(kWidth, 0) + " " + fixed(kHeight, 0) +
         "\" font-family=\"sans-serif\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fixed(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(plot.title) + "</text>\n";
  return svg;
}

std::string cartesian(const PlotSpec& plot, const std::vector<Points>& pts) {
  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  for (const auto& p : pts) {
    for (double v : p.x) xlo = std::min(xlo, v), xhi = std::max(xhi, v);
    for (double v : p.y) ylo = std::min(ylo, v), yhi = std::max(yhi, v);
  }
  if (!std::isfinite(xlo)) xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  const Range xr = padded(xlo, xhi), yr = padded(ylo, yhi);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double v) { return kTop + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::string svg = header(plot);
  svg += "<rect x=\"" + fixed(kLeft) + "\" y=\"" + fixed(kTop) + "\" width=\"" + fixed(pw) + "\" height=\"" +
         fixed(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  const double xs = nice_step(xr.hi - xr.lo), ys = nice_step(yr.hi - yr.lo);
  for (double v = xr.lo; v <= xr.hi + xs * 1e-6; v += xs) {
    svg += "<line x1=\"" + fixed(sx(v)) + "\" y1=\"" + fixed(kTop + ph) + "\" x2=\"" + fixed(sx(v)) + "\" y2=\"" +
           fixed(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fixed(sx(v)) + "\" y=\"" + fixed(kTop + ph + 18) +
           "\" text-anchor=\"middle\" font-size=\"10\">" + fixed(v, tick_digits(xs)) + "</text>\n";
  }
  for (double v = yr.lo; v <= yr.hi + ys * 1e-6; v += ys) {
    svg += "<line x1=\"" + fixed(kLeft - 5) + "\" y1=\"" + fixed(sy(v)) + "\" x2=\"" + fixed(kLeft) + "\" y2=\"" +
           fixed(sy(v)) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fixed(kLeft - 8) + "\" y=\"" + fixed(sy(v) + 3) +
           "\" text-anchor=\"end\" font-size=\"10\">" + fixed(v, tick_digits(ys)) + "</text>\n";
  }
  svg += "<text x=\"" + fixed(kLeft + pw / 2) + "\" y=\"" + fixed(kHeight - 12) +
         "\" text-anchor=\"middle\" font-size=\"12\">" + escape(plot.x_label) + "</text>\n";
  svg += "<text transform=\"translate(16 " + fixed(kTop + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">" + escape(plot.y_label) + "</text>\n";

  const bool lines = plot.kind == PlotKind::Line;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const char* color = kPalette[k % kPalette.size()];
    labels.push_back(plot.series[k].label);
    if (lines) {
      if (pts[k].x.empty()) continue;
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < pts[k].x.size(); ++i) {
        if (i) svg += ' ';
        svg += fixed(sx(pts[k].x[i])) + "," + fixed(sy(pts[k].y[i]));
      }
      svg += "\"/>\n";
    } else {
      svg += "<g fill=\"" + std::string(color) + "\" fill-opacity=\"0.7\">\n";
      for (std::size_t i = 0; i < pts[k].x.size(); ++i) {
        svg += "<circle cx=\"" + fixed(sx(pts[k].x[i])) + "\" cy=\"" + fixed(sy(pts[k].y[i])) + "\" r=\"2.5\"/>\n";
      }
      svg += "</g>\n";
    }
  }
  // Too many traces make the legend useless.
  if (labels.size() <= 12) legend(svg, labels, lines);
  return svg + "</svg>\n";
}

std::string polar(const PlotSpec& plot, const std::vector<Points>& pts) {
  double rmax = 0;
  for (const auto& p : pts) {
    for (double r : p.y) rmax = std::max(rmax, std::abs(r));
  }
  if (!(rmax > 0)) rmax = 1;
  const double ph = kHeight - kTop - kBottom;
  const double cx = kLeft + (kWidth - kLeft - kRight) / 2, cy = kTop + ph / 2, radius = ph / 2;
  auto px = [&](double th, double r) { return cx + radius * r / rmax * std::cos(th); };
  auto py = [&](double th, double r) { return cy - radius * r / rmax * std::sin(th); };

  std::string svg = header(plot);
  for (int ring = 1; ring <= 4; ++ring) {
    svg += "<circle cx=\"" + fixed(cx) + "\" cy=\"" + fixed(cy) + "\" r=\"" + fixed(radius * ring / 4) +
           "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
  }
  for (int k = 0; k < 4; ++k) {
    const double th = k * std::numbers::pi / 4;
    svg += "<line x1=\"" + fixed(px(th, rmax)) + "\" y1=\"" + fixed(py(th, rmax)) + "\" x2=\"" +
           fixed(px(th + std::numbers::pi, rmax)) + "\" y2=\"" + fixed(py(th + std::numbers::pi, rmax)) +
           "\" stroke=\"#cccccc\"/>\n";
  }
  svg += "<text x=\"" + fixed(cx + radius + 4) + "\" y=\"" + fixed(cy - 4) + "\" font-size=\"10\">" +
         fixed(rmax, 2) + "</text>\n";
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    labels.push_back(plot.series[k].label);
    if (pts[k].x.empty()) continue;
    // Sort by angle and close the curve.
    std::vector<std::size_t> order(pts[k].x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return pts[k].x[a] < pts[k].x[b]; });
    svg += "<polygon fill=\"none\" stroke=\"" + std::string(kPalette[k % kPalette.size()]) +
           "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i) svg += ' ';
      const double th = pts[k].x[order[i]], r = std::max(pts[k].y[order[i]], 0.0);
      svg += fixed(px(th, r)) + "," + fixed(py(th, r));
    }
    svg += "\"/>\n";
  }
  legend(svg, labels, true);
  return svg + "</svg>\n";
}

}  // namespace

std::string render_svg(const ExperimentReport& report, const PlotSpec& plot) {
  if (report.rows.empty()) throw EmptyReport("report " + report.name + " has no rows to plot");
  std::vector<Points> pts;
  for (const auto& s : plot.series) pts.push_back(collect(report, s));
  if (plot.kind == PlotKind::Polar) return polar(plot, pts);
  return cartesian(plot, pts);
}

void emit_svg_plot(const ExperimentReport& report, PlotKind kind, const std::filesystem::path& out) {
  if (report.rows.empty()) throw EmptyReport("report " + report.name + " has no rows to plot");
  for (const auto& p : report.plots) {
    if (p.kind == kind) {
      write_text_file(out, render_svg(report, p));
      return;
    }
  }
  std::vector<std::string> numeric;
  for (std::size_t c = 0; c < report.columns.size() && numeric.size() < 2; ++c) {
    if (ExperimentReport::number(report.rows.front()[c])) numeric.push_back(report.columns[c]);
  }
  if (numeric.size() < 2) throw std::invalid_argument("report " + report.name + " has fewer than two numeric columns");
  PlotSpec p{report.name, kind, report.name, numeric[0], numeric[1],
             {{numeric[1], numeric[0], numeric[1], "", std::int64_t{0}}}};
  write_text_file(out, render_svg(report, p));
}

}  // namespace fpnet
