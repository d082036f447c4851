#include "sobnet/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace sobnet {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

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

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;

  double map(double v) const { return log ? std::log10(v) : v; }
  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
  double frac(double v) const { return (map(v) - lo) / (hi - lo); }
};

Axis fit_axis(const std::vector<const std::vector<double>*>& data, bool log) {
  Axis a;
  a.log = log;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto* v : data) {
    for (double x : *v) {
      if (!a.usable(x)) continue;
      lo = std::min(lo, a.map(x));
      hi = std::max(hi, a.map(x));
    }
  }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
    lo -= 0.5;
    hi += 0.5;
  }
  if (log) {
    lo = std::floor(lo);
    hi = std::ceil(hi);
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  a.lo = lo;
  a.hi = hi;
  return a;
}

std::vector<double> ticks(const Axis& a) {
  std::vector<double> t;
  if (a.log) {
    const int step = std::max(1, static_cast<int>(std::ceil((a.hi - a.lo) / 8.0)));
    for (double e = a.lo; e <= a.hi + 1e-9; e += step) t.push_back(std::pow(10.0, e));
    return t;
  }
  const double raw = (a.hi - a.lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  for (double v = std::ceil(a.lo / step) * step; v <= a.hi + 1e-9 * step; v += step) {
    t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return t;
}

}  // namespace

std::string render_svg(const Chart& chart) {
  std::vector<const std::vector<double>*> xs;
  std::vector<const std::vector<double>*> ys;
  for (const auto& s : chart.series) {
    xs.push_back(&s.x);
    ys.push_back(&s.y);
  }
  if (chart.band) {
    xs.push_back(&chart.band->x);
    ys.push_back(&chart.band->lo);
    ys.push_back(&chart.band->hi);
  }
  const Axis ax = fit_axis(xs, chart.logx);
  const Axis ay = fit_axis(ys, chart.logy);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + ax.frac(v) * pw; };
  auto py = [&](double v) { return kTop + (1.0 - ay.frac(v)) * ph; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" fill=\"white\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"15\">"
    << escape(chart.title) << "</text>\n";

  // Axes box and ticks.
  o << "<polyline fill=\"none\" stroke=\"black\" points=\"" << fmt("%.2f", kLeft) << ','
    << fmt("%.2f", kTop) << ' ' << fmt("%.2f", kLeft) << ',' << fmt("%.2f", kTop + ph) << ' '
    << fmt("%.2f", kLeft + pw) << ',' << fmt("%.2f", kTop + ph) << "\"/>\n";
  for (double t : ticks(ax)) {
    const double x = px(t);
    o << "<line x1=\"" << fmt("%.2f", x) << "\" y1=\"" << fmt("%.2f", kTop + ph) << "\" x2=\""
      << fmt("%.2f", x) << "\" y2=\"" << fmt("%.2f", kTop + ph + 5) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << fmt("%.2f", x) << "\" y=\"" << fmt("%.2f", kTop + ph + 18)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
      << fmt("%.4g", t) << "</text>\n";
  }
  for (double t : ticks(ay)) {
    const double y = py(t);
    o << "<line x1=\"" << fmt("%.2f", kLeft - 5) << "\" y1=\"" << fmt("%.2f", y) << "\" x2=\""
      << fmt("%.2f", kLeft) << "\" y2=\"" << fmt("%.2f", y) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << fmt("%.2f", kLeft - 8) << "\" y=\"" << fmt("%.2f", y + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt("%.4g", t)
      << "</text>\n";
  }
  o << "<text x=\"" << fmt("%.2f", kLeft + pw / 2) << "\" y=\"" << fmt("%.2f", kHeight - 10)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
    << escape(chart.xlabel) << "</text>\n";
  o << "<text x=\"16\" y=\"" << fmt("%.2f", kTop + ph / 2)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 "
    << fmt("%.2f", kTop + ph / 2) << ")\">" << escape(chart.ylabel) << "</text>\n";

  if (chart.band) {
    const Band& b = *chart.band;
    o << "<polygon fill=\"#1f77b4\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < b.x.size(); ++i) {
      if (!ax.usable(b.x[i]) || !ay.usable(b.hi[i])) continue;
      o << (first ? "" : " ") << fmt("%.2f", px(b.x[i])) << ',' << fmt("%.2f", py(b.hi[i]));
      first = false;
    }
    for (std::size_t i = b.x.size(); i-- > 0;) {
      if (!ax.usable(b.x[i]) || !ay.usable(b.lo[i])) continue;
      o << (first ? "" : " ") << fmt("%.2f", px(b.x[i])) << ',' << fmt("%.2f", py(b.lo[i]));
      first = false;
    }
    o << "\"/>\n";
  }

  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    const Series& se = chart.series[s];
    const char* color = kColors[s % (sizeof kColors / sizeof kColors[0])];
    if (chart.scatter) {
      for (std::size_t i = 0; i < se.x.size(); ++i) {
        if (!ax.usable(se.x[i]) || !ay.usable(se.y[i])) continue;
        o << "<circle cx=\"" << fmt("%.2f", px(se.x[i])) << "\" cy=\"" << fmt("%.2f", py(se.y[i]))
          << "\" r=\"2.5\" fill=\"" << color << "\" fill-opacity=\"0.6\"/>\n";
      }
    } else {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      bool first = true;
      for (std::size_t i = 0; i < se.x.size(); ++i) {
        if (!ax.usable(se.x[i]) || !ay.usable(se.y[i])) continue;
        o << (first ? "" : " ") << fmt("%.2f", px(se.x[i])) << ',' << fmt("%.2f", py(se.y[i]));
        first = false;
      }
      o << "\"/>\n";
    }
    o << "<text x=\"" << fmt("%.2f", kLeft + pw - 4) << "\" y=\"" << fmt("%.2f", kTop + 14 + 14 * s)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color
      << "\">" << escape(se.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace sobnet
