#pragma once

// Deterministic SVG line charts (fixed canvas, fixed number formatting, no
// timestamps), so rendered figures can be compared byte for byte.

#include <optional>
#include <string>
#include <vector>

#include "afb/trajectory.hpp"

namespace afb {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> t;
  std::vector<double> y;
};

struct HorizontalLine {
  std::string label;
  std::string color;
  double y;
};

struct Chart {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  std::vector<Series> series;
  std::vector<HorizontalLine> lines;
};

std::string render_svg(const Chart& chart);

/// All four states against time.
std::string states_svg(const Trajectory& traj, const std::string& title);

/// x1 against time with the certified bound M1 drawn as a dashed line.
std::string x1_bound_svg(const Trajectory& traj, double M1, const std::string& title);

}  // namespace afb
