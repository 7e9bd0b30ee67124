#pragma once

#include <string>
#include <vector>

// Minimal SVG line/scatter plot writer: axes, ticks, labels, series.

namespace tadpole::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> y_error;  // optional, symmetric
  bool line = false;            // false: markers
  std::string color = "#1f77b4";
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  int width = 640;
  int height = 440;
};

/// "Nice" tick positions (1-2-5 steps) covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

std::string render(const Plot& plot);

}  // namespace tadpole::svg
