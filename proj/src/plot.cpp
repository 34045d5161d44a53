#include "afb/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace afb {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 450.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr std::size_t kPlotSamples = 2000;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string coord(double v) { return fmt("%.2f", v); }

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

// Tick step of the form {1, 2, 5} x 10^k giving roughly `target` ticks.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double nice = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
  return nice * mag;
}

std::vector<double> ticks(double lo, double hi) {
  const double step = nice_step(hi - lo, 5);
  std::vector<double> out;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) {
    out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return out;
}

Series sample_component(const Trajectory& traj, std::size_t k, std::string label, std::string color) {
  Series s{std::move(label), std::move(color), {}, {}};
  const double t0 = traj.start_time();
  const double t1 = traj.end_time();
  for (std::size_t i = 0; i <= kPlotSamples; ++i) {
    const double t = i == kPlotSamples ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / kPlotSamples;
    s.t.push_back(t);
    s.y.push_back(traj.evaluate(t)[k]);
  }
  return s;
}

}  // namespace

std::string render_svg(const Chart& chart) {
  double t_min = 0.0, t_max = 1.0, y_min = 0.0, y_max = 0.0;
  bool first = true;
  for (const Series& s : chart.series) {
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      if (first) {
        t_min = t_max = s.t[i];
        first = false;
      }
      t_min = std::min(t_min, s.t[i]);
      t_max = std::max(t_max, s.t[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  }
  for (const HorizontalLine& l : chart.lines) y_max = std::max(y_max, l.y);
  if (!(t_max > t_min)) t_max = t_min + 1.0;
  if (!(y_max > y_min)) y_max = y_min + 1.0;
  y_max += 0.05 * (y_max - y_min);

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double t) { return kLeft + (t - t_min) / (t_max - t_min) * pw; };
  const auto py = [&](double y) { return kTop + ph - (y - y_min) / (y_max - y_min) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"450\" viewBox=\"0 0 800 450\">\n";
  svg += "<rect width=\"800\" height=\"450\" fill=\"white\"/>\n";
  svg += "<text x=\"" + coord(kLeft + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         escape(chart.title) + "</text>\n";

  // Axes and ticks.
  svg += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  svg += "<rect x=\"" + coord(kLeft) + "\" y=\"" + coord(kTop) + "\" width=\"" + coord(pw) +
         "\" height=\"" + coord(ph) + "\"/>\n";
  svg += "</g>\n<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (double t : ticks(t_min, t_max)) {
    const std::string x = coord(px(t));
    svg += "<line x1=\"" + x + "\" y1=\"" + coord(kTop + ph) + "\" x2=\"" + x + "\" y2=\"" +
           coord(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + x + "\" y=\"" + coord(kTop + ph + 20) + "\" text-anchor=\"middle\">" +
           fmt("%g", t) + "</text>\n";
  }
  for (double y : ticks(y_min, y_max)) {
    const std::string yy = coord(py(y));
    svg += "<line x1=\"" + coord(kLeft - 5) + "\" y1=\"" + yy + "\" x2=\"" + coord(kLeft) + "\" y2=\"" +
           yy + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + coord(kLeft - 8) + "\" y=\"" + coord(py(y) + 4) + "\" text-anchor=\"end\">" +
           fmt("%g", y) + "</text>\n";
  }
  svg += "<text x=\"" + coord(kLeft + pw / 2) + "\" y=\"" + coord(kHeight - 10) + "\" text-anchor=\"middle\">" +
         escape(chart.x_label) + "</text>\n";
  if (!chart.y_label.empty()) {
    svg += "<text x=\"18\" y=\"" + coord(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           coord(kTop + ph / 2) + ")\">" + escape(chart.y_label) + "</text>\n";
  }
  svg += "</g>\n";

  // Data.
  std::size_t legend_row = 0;
  const auto legend = [&](const std::string& label, const std::string& color, bool dashed) {
    const double y = kTop + 10 + 20.0 * static_cast<double>(legend_row++);
    const double x = kLeft + pw + 15;
    svg += "<line x1=\"" + coord(x) + "\" y1=\"" + coord(y) + "\" x2=\"" + coord(x + 25) + "\" y2=\"" +
           coord(y) + "\" stroke=\"" + color + "\" stroke-width=\"2\"" +
           (dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
    svg += "<text x=\"" + coord(x + 32) + "\" y=\"" + coord(y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(label) + "</text>\n";
  };
  for (const Series& s : chart.series) {
    svg += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      if (i > 0) svg += ' ';
      svg += coord(px(s.t[i])) + ',' + coord(py(s.y[i]));
    }
    svg += "\"/>\n";
    legend(s.label, s.color, false);
  }
  for (const HorizontalLine& l : chart.lines) {
    svg += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(py(l.y)) + "\" x2=\"" + coord(kLeft + pw) +
           "\" y2=\"" + coord(py(l.y)) + "\" stroke=\"" + l.color +
           "\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
    legend(l.label, l.color, true);
  }
  svg += "</svg>\n";
  return svg;
}

std::string states_svg(const Trajectory& traj, const std::string& title) {
  Chart chart{.title = title, .y_label = "concentration"};
  chart.series.push_back(sample_component(traj, 0, "x1", "#1f77b4"));
  chart.series.push_back(sample_component(traj, 1, "x2", "#ff7f0e"));
  chart.series.push_back(sample_component(traj, 2, "x3", "#2ca02c"));
  chart.series.push_back(sample_component(traj, 3, "x4", "#d62728"));
  return render_svg(chart);
}

std::string x1_bound_svg(const Trajectory& traj, double M1, const std::string& title) {
  Chart chart{.title = title, .y_label = "x1"};
  chart.series.push_back(sample_component(traj, 0, "x1", "#1f77b4"));
  chart.lines.push_back({"M1 = " + fmt("%.4f", M1), "#d62728", M1});
  return render_svg(chart);
}

}  // namespace afb
