#pragma once
// Minimal deterministic SVG charts: line/scatter plots with optional log axes
// and shaded bands, and labeled bar charts. Fixed 720x400 layout; numbers are
// printed with a fixed precision so output bytes depend only on the data.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hatenet::svg {

inline constexpr const char* kPalette[] = {"#c0392b", "#2471a3", "#7d3c98", "#7f8c8d", "#d68910",
                                           "#229954"};

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
  std::string color = kPalette[0];
  bool line = true;
  bool markers = false;
  bool dashed = false;
};

struct Band {
  std::vector<double> x, lo, hi;
  std::string color = kPalette[3];
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<Series> series;
  std::vector<Band> bands;
  std::optional<double> reference_y;
  // Optional custom x tick labels at given x positions.
  std::vector<std::pair<double, std::string>> x_ticks;
};

namespace detail {

inline constexpr double kW = 720, kH = 400, kL = 70, kR = 160, kT = 40, kB = 55;

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

inline std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline std::string header(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kW) + "\" height=\"" +
         num(kH) + "\" viewBox=\"0 0 " + num(kW) + " " + num(kH) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         "<text x=\"" + num(kW / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(title) + "</text>\n";
}

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;
  double px0 = 0, px1 = 1;

  double t(double v) const { return log ? std::log10(v) : v; }
  double map(double v) const {
    const double a = t(lo), b = t(hi);
    const double f = b > a ? (t(v) - a) / (b - a) : 0.5;
    return px0 + f * (px1 - px0);
  }
  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      for (double e = std::floor(std::log10(lo)); e <= std::ceil(std::log10(hi)); e += 1) {
        const double v = std::pow(10.0, e);
        if (v >= lo * (1 - 1e-9) && v <= hi * (1 + 1e-9)) out.push_back(v);
      }
      return out;
    }
    const double span = hi - lo;
    const double raw = span / 5;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
      if (raw <= m * mag) {
        step = m * mag;
        break;
      }
    for (double v = std::ceil(lo / step) * step; v <= hi + step * 1e-9; v += step)
      out.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
    return out;
  }
};

inline Axis make_axis(std::vector<double> values, bool log, double px0, double px1,
                      bool include_zero) {
  Axis a;
  a.log = log;
  a.px0 = px0;
  a.px1 = px1;
  values.erase(std::remove_if(values.begin(), values.end(),
                              [&](double v) { return !std::isfinite(v) || (log && v <= 0); }),
               values.end());
  if (values.empty()) {
    a.lo = log ? 1 : 0;
    a.hi = log ? 10 : 1;
    return a;
  }
  a.lo = *std::min_element(values.begin(), values.end());
  a.hi = *std::max_element(values.begin(), values.end());
  if (log) {
    a.lo = std::pow(10.0, std::floor(std::log10(a.lo)));
    a.hi = std::pow(10.0, std::ceil(std::log10(a.hi)));
    if (a.hi <= a.lo) a.hi = a.lo * 10;
  } else {
    if (include_zero) a.lo = std::min(a.lo, 0.0);
    if (a.hi <= a.lo) a.hi = a.lo + 1;
    a.hi += (a.hi - a.lo) * 0.05;
  }
  return a;
}

inline std::string legend(const std::vector<std::pair<std::string, std::string>>& items) {
  std::string out;
  double y = kT + 10;
  for (const auto& [name, color] : items) {
    const double x = kW - kR + 15;
    out += "<rect x=\"" + num(x) + "\" y=\"" + num(y - 8) + "\" width=\"12\" height=\"8\" fill=\"" +
           color + "\"/>\n<text x=\"" + num(x + 18) + "\" y=\"" + num(y) + "\">" + escape(name) +
           "</text>\n";
    y += 18;
  }
  return out;
}

}  // namespace detail

inline std::string render_chart(const ChartSpec& spec) {
  using namespace detail;
  std::vector<double> xs, ys;
  for (const auto& s : spec.series)
    for (const auto& [x, y] : s.points) {
      xs.push_back(x);
      ys.push_back(y);
    }
  for (const auto& b : spec.bands) {
    xs.insert(xs.end(), b.x.begin(), b.x.end());
    ys.insert(ys.end(), b.lo.begin(), b.lo.end());
    ys.insert(ys.end(), b.hi.begin(), b.hi.end());
  }
  if (spec.reference_y) ys.push_back(*spec.reference_y);
  const Axis ax = make_axis(xs, spec.log_x, kL, kW - kR, false);
  const Axis ay = make_axis(ys, spec.log_y, kH - kB, kT, true);
  auto ok = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!spec.log_x || x > 0) && (!spec.log_y || y > 0);
  };

  std::string out = header(spec.title);
  // Frame and ticks.
  out += "<rect x=\"" + num(kL) + "\" y=\"" + num(kT) + "\" width=\"" + num(kW - kL - kR) +
         "\" height=\"" + num(kH - kT - kB) + "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (double v : ay.ticks()) {
    const double py = ay.map(v);
    out += "<line x1=\"" + num(kL - 4) + "\" y1=\"" + num(py) + "\" x2=\"" + num(kL) + "\" y2=\"" +
           num(py) + "\" stroke=\"#333\"/>\n<text x=\"" + num(kL - 6) + "\" y=\"" + num(py + 4) +
           "\" text-anchor=\"end\">" + tick_label(v) + "</text>\n";
  }
  std::vector<std::pair<double, std::string>> xt = spec.x_ticks;
  if (xt.empty())
    for (double v : ax.ticks()) xt.emplace_back(v, tick_label(v));
  for (const auto& [v, label] : xt) {
    const double px = ax.map(v);
    out += "<line x1=\"" + num(px) + "\" y1=\"" + num(kH - kB) + "\" x2=\"" + num(px) +
           "\" y2=\"" + num(kH - kB + 4) + "\" stroke=\"#333\"/>\n<text x=\"" + num(px) +
           "\" y=\"" + num(kH - kB + 16) + "\" text-anchor=\"middle\">" + escape(label) +
           "</text>\n";
  }
  out += "<text x=\"" + num((kL + kW - kR) / 2) + "\" y=\"" + num(kH - 12) +
         "\" text-anchor=\"middle\">" + escape(spec.x_label) + "</text>\n";
  out += "<text transform=\"translate(16," + num((kT + kH - kB) / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(spec.y_label) + "</text>\n";

  for (const auto& b : spec.bands) {
    std::string pts;
    for (std::size_t i = 0; i < b.x.size(); ++i)
      if (ok(b.x[i], b.hi[i])) pts += num(ax.map(b.x[i])) + "," + num(ay.map(b.hi[i])) + " ";
    for (std::size_t i = b.x.size(); i-- > 0;)
      if (ok(b.x[i], b.lo[i])) pts += num(ax.map(b.x[i])) + "," + num(ay.map(b.lo[i])) + " ";
    if (!pts.empty())
      out += "<polygon points=\"" + pts + "\" fill=\"" + b.color +
             "\" fill-opacity=\"0.25\" stroke=\"none\"/>\n";
  }
  if (spec.reference_y && ok(1, *spec.reference_y)) {
    const double py = ay.map(*spec.reference_y);
    out += "<line x1=\"" + num(kL) + "\" y1=\"" + num(py) + "\" x2=\"" + num(kW - kR) +
           "\" y2=\"" + num(py) + "\" stroke=\"#555\" stroke-dasharray=\"4 3\"/>\n";
  }
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& s : spec.series) {
    items.emplace_back(s.name, s.color);
    if (s.line) {
      std::string pts;
      for (const auto& [x, y] : s.points)
        if (ok(x, y)) pts += num(ax.map(x)) + "," + num(ay.map(y)) + " ";
      if (!pts.empty())
        out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + s.color +
               "\" stroke-width=\"1.5\"" + (s.dashed ? " stroke-dasharray=\"5 3\"" : "") + "/>\n";
    }
    if (s.markers)
      for (const auto& [x, y] : s.points)
        if (ok(x, y))
          out += "<circle cx=\"" + num(ax.map(x)) + "\" cy=\"" + num(ay.map(y)) +
                 "\" r=\"3\" fill=\"" + s.color + "\"/>\n";
  }
  out += legend(items);
  out += "</svg>\n";
  return out;
}

struct Bar {
  std::string label;
  double value = 0;
  std::string color = kPalette[1];
};

// Vertical bars; NaN bars are drawn as an "NA" label with no bar.
inline std::string render_bars(const std::string& title, const std::string& y_label,
                               const std::vector<Bar>& bars, std::optional<double> reference = {}) {
  using namespace detail;
  std::vector<double> ys;
  for (const auto& b : bars) ys.push_back(b.value);
  if (reference) ys.push_back(*reference);
  const Axis ay = make_axis(ys, false, kH - kB, kT, true);
  std::string out = header(title);
  const double x0 = kL, x1 = kW - 20;
  out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(kH - kB) + "\" x2=\"" + num(x1) + "\" y2=\"" +
         num(kH - kB) + "\" stroke=\"#333\"/>\n";
  out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(kT) + "\" x2=\"" + num(x0) + "\" y2=\"" +
         num(kH - kB) + "\" stroke=\"#333\"/>\n";
  for (double v : ay.ticks()) {
    const double py = ay.map(v);
    out += "<text x=\"" + num(x0 - 6) + "\" y=\"" + num(py + 4) + "\" text-anchor=\"end\">" +
           tick_label(v) + "</text>\n";
  }
  out += "<text transform=\"translate(16," + num((kT + kH - kB) / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(y_label) + "</text>\n";
  const double slot = bars.empty() ? 1 : (x1 - x0) / static_cast<double>(bars.size());
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const auto& b = bars[i];
    const double cx = x0 + slot * (static_cast<double>(i) + 0.5);
    if (std::isfinite(b.value)) {
      const double top = ay.map(std::max(b.value, ay.lo));
      const double base = ay.map(std::max(0.0, ay.lo));
      out += "<rect x=\"" + num(cx - slot * 0.35) + "\" y=\"" + num(std::min(top, base)) +
             "\" width=\"" + num(slot * 0.7) + "\" height=\"" + num(std::abs(base - top)) +
             "\" fill=\"" + b.color + "\"/>\n";
      out += "<text x=\"" + num(cx) + "\" y=\"" + num(std::min(top, base) - 3) +
             "\" text-anchor=\"middle\" font-size=\"9\">" + tick_label(b.value) + "</text>\n";
    } else {
      out += "<text x=\"" + num(cx) + "\" y=\"" + num(kH - kB - 4) +
             "\" text-anchor=\"middle\" font-size=\"9\">NA</text>\n";
    }
    out += "<text transform=\"translate(" + num(cx) + "," + num(kH - kB + 10) +
           ") rotate(35)\" font-size=\"9\">" + escape(b.label) + "</text>\n";
  }
  if (reference) {
    const double py = ay.map(*reference);
    out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(py) + "\" x2=\"" + num(x1) + "\" y2=\"" +
           num(py) + "\" stroke=\"#555\" stroke-dasharray=\"4 3\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace hatenet::svg
