#include "tadpole/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "tadpole/errors.hpp"

namespace tadpole::svg {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-300 ? 0.0 : v);
  return buf;
}

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target) {
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
    lo -= pad;
    hi += pad;
  }
  const double raw = (hi - lo) / std::max(target, 2);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  const double first = std::floor(lo / step);
  const double last = std::ceil(hi / step);
  std::vector<double> ticks;
  for (double k = first; k <= last; k += 1.0) ticks.push_back(k * step);
  return ticks;
}

std::string render(const Plot& plot) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : plot.series) {
    if (s.x.size() != s.y.size()) throw DomainError("svg: series '" + s.name + "' x/y size mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double e = i < s.y_error.size() ? s.y_error[i] : 0.0;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i] - e);
      ymax = std::max(ymax, s.y[i] + e);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  const auto xt = nice_ticks(xmin, xmax);
  const auto yt = nice_ticks(ymin, ymax);
  const double x0 = xt.front(), x1 = xt.back(), y0 = yt.front(), y1 = yt.back();

  const double left = 80, right = 20, top = 40, bottom = 60;
  const double pw = plot.width - left - right, ph = plot.height - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + ph - (y - y0) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width << "\" height=\"" << plot.height
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
    << escape(plot.title) << "</text>\n";
  o << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\""
    << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : xt) {
    o << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(px(t)) << "\" y2=\""
      << num(top + ph + 5) << "\" stroke=\"black\"/>";
    o << "<text x=\"" << num(px(t)) << "\" y=\"" << num(top + ph + 18) << "\" text-anchor=\"middle\">"
      << tick_label(t) << "</text>\n";
  }
  for (double t : yt) {
    o << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(left) << "\" y2=\""
      << num(py(t)) << "\" stroke=\"black\"/>";
    o << "<text x=\"" << num(left - 8) << "\" y=\"" << num(py(t) + 4) << "\" text-anchor=\"end\">"
      << tick_label(t) << "</text>\n";
  }
  o << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(plot.height - 15)
    << "\" text-anchor=\"middle\">" << escape(plot.x_label) << "</text>\n";
  o << "<text x=\"18\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << num(top + ph / 2) << ")\">" << escape(plot.y_label) << "</text>\n";

  double legend_y = top + 16;
  for (const auto& s : plot.series) {
    o << "<g stroke=\"" << s.color << "\" fill=\"" << s.color << "\">\n";
    if (s.line && s.x.size() > 1) {
      o << "<polyline fill=\"none\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) o << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
      o << "\"/>\n";
    } else {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (i < s.y_error.size() && s.y_error[i] > 0.0) {
          o << "<line x1=\"" << num(px(s.x[i])) << "\" y1=\"" << num(py(s.y[i] - s.y_error[i]))
            << "\" x2=\"" << num(px(s.x[i])) << "\" y2=\"" << num(py(s.y[i] + s.y_error[i])) << "\"/>";
        }
        o << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i])) << "\" r=\"3\"/>\n";
      }
    }
    o << "</g>\n";
    if (!s.name.empty()) {
      o << "<text x=\"" << num(left + pw - 10) << "\" y=\"" << num(legend_y) << "\" text-anchor=\"end\" fill=\""
        << s.color << "\">" << escape(s.name) << "</text>\n";
      legend_y += 16;
    }
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace tadpole::svg
