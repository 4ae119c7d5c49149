#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "clamp_engine.hpp"
#include "threshold_search.hpp"

namespace excitability {

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline const char* to_string(MinimumKind k) {
  switch (k) {
    case MinimumKind::Interior: return "interior";
    case MinimumKind::UpperBoundary: return "upper-boundary";
    case MinimumKind::LowerBoundary: return "lower-boundary";
  }
  return "?";
}

inline const char* to_string(ThresholdKind k) {
  switch (k) {
    case ThresholdKind::InteriorLocalMax: return "InteriorLocalMax";
    case ThresholdKind::BoundarySaddle: return "BoundarySaddle";
    case ThresholdKind::NoneFound: return "NoneFound";
  }
  return "?";
}

inline const char* to_string(EventKind k) { return k == EventKind::Spike ? "Spike" : "Decay"; }

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr const char* kUnboundedSentinel = "unbounded";

/// One row per node. Inhibitory landscapes add B, beta_star and v_terminal.
inline std::string landscape_csv(const Landscape& l) {
  std::ostringstream out;
  out << (l.inhibitory ? "A,S_r,alpha_star,B,beta_star,v_terminal\n" : "A,S_r,alpha_star\n");
  for (const auto& n : l.nodes) {
    out << format_double(n.amplitude) << ',' << (n.unbounded ? kUnboundedSentinel : format_double(n.supply)) << ','
        << format_double(n.rate);
    if (l.inhibitory)
      out << ',' << format_double(n.inhibition) << ',' << format_double(n.inhibition_rate) << ','
          << format_double(n.terminal);
    out << '\n';
  }
  return out.str();
}

/// Clamp samples as CSV, thinned to at most `max_rows` rows (the final node is always kept).
inline std::string trajectory_csv(const TrajectorySamples& s, std::size_t max_rows = 2001) {
  std::ostringstream out;
  out << "t,v,i";
  for (const auto& name : s.state_names) out << ',' << name;
  out << ",cumulative_supply\n";
  const std::size_t n = s.t.size();
  const std::size_t stride = n > max_rows && max_rows > 1 ? (n - 1 + max_rows - 2) / (max_rows - 1) : 1;
  auto row = [&](std::size_t k) {
    out << format_double(s.t[k]) << ',' << format_double(s.v[k]) << ',' << format_double(s.i[k]);
    for (const auto& col : s.state) out << ',' << format_double(col[k]);
    out << ',' << format_double(s.cumulative_supply[k]) << '\n';
  };
  for (std::size_t k = 0; k < n; k += stride) row(k);
  if (n > 0 && (n - 1) % stride != 0) row(n - 1);
  return out.str();
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline nlohmann::json node_json(const LandscapeNode& n) {
  nlohmann::json j{{"A", n.amplitude},
                   {"v_terminal", n.terminal},
                   {"alpha_star", n.rate},
                   {"minimum", to_string(n.kind)},
                   {"unbounded", n.unbounded}};
  j["S_r"] = n.unbounded ? nlohmann::json(kUnboundedSentinel) : nlohmann::json(n.supply);
  if (n.inhibition > 0.0) {
    j["B"] = n.inhibition;
    j["beta_star"] = n.inhibition_rate;
  }
  return j;
}

inline nlohmann::json event_json(const EventOutcome& e) {
  return {{"kind", to_string(e.kind)},
          {"peak", e.peak},
          {"peak_time", e.peak_time},
          {"final_voltage", e.final_voltage}};
}

inline nlohmann::json report_json(const ThresholdReport& r) {
  nlohmann::json j{{"kind", to_string(r.kind)}};
  if (r.kind == ThresholdKind::NoneFound) return j;
  j["point"] = node_json(r.point);
  j["resolution"] = r.resolution;
  j["coarse_spacing"] = r.coarse_spacing;
  j["coarse_index"] = r.coarse_index;
  if (r.event) j["event"] = event_json(*r.event);
  return j;
}

// ---------------------------------------------------------------------------
// SVG line plots
// ---------------------------------------------------------------------------

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  // non-finite values break the line
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<double> vertical_markers;
};

namespace detail {

inline std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step)
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  return ticks;
}

inline std::string xml_escape(const std::string& s) {
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

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace detail

inline std::string svg_line_plot(const PlotSpec& spec) {
  constexpr double W = 720, H = 480, left = 80, right = 20, top = 40, bottom = 60;
  static const char* colors[] = {"#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d35400"};

  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const auto& s : spec.series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  if (!std::isfinite(xlo)) xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  if (xhi == xlo) xhi = xlo + 1.0;
  if (yhi == ylo) yhi = ylo + 1.0;
  const double pad = 0.05 * (yhi - ylo);
  ylo -= pad;
  yhi += pad;

  auto px = [&](double x) { return left + (x - xlo) / (xhi - xlo) * (W - left - right); };
  auto py = [&](double y) { return H - bottom - (y - ylo) / (yhi - ylo) * (H - top - bottom); };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
    << detail::xml_escape(spec.title) << "</text>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom
    << "\" stroke=\"black\"/>\n";
  for (double t : detail::nice_ticks(xlo, xhi)) {
    o << "<line x1=\"" << num(px(t)) << "\" y1=\"" << H - bottom << "\" x2=\"" << num(px(t)) << "\" y2=\""
      << H - bottom + 5 << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << num(px(t)) << "\" y=\"" << H - bottom + 18 << "\" text-anchor=\"middle\">"
      << detail::tick_label(t) << "</text>\n";
  }
  for (double t : detail::nice_ticks(ylo, yhi)) {
    o << "<line x1=\"" << left - 5 << "\" y1=\"" << num(py(t)) << "\" x2=\"" << left << "\" y2=\"" << num(py(t))
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << left - 8 << "\" y=\"" << num(py(t) + 4) << "\" text-anchor=\"end\">"
      << detail::tick_label(t) << "</text>\n";
  }
  o << "<text x=\"" << (left + W - right) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
    << detail::xml_escape(spec.x_label) << "</text>\n";
  o << "<text transform=\"translate(20," << (top + H - bottom) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << detail::xml_escape(spec.y_label) << "</text>\n";

  for (double m : spec.vertical_markers) {
    if (!(m >= xlo && m <= xhi)) continue;
    o << "<line x1=\"" << num(px(m)) << "\" y1=\"" << top << "\" x2=\"" << num(px(m)) << "\" y2=\"" << H - bottom
      << "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
  }

  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const auto& ser = spec.series[s];
    const char* color = colors[s % 5];
    std::string path;
    bool pen_down = false;
    for (std::size_t i = 0; i < ser.x.size() && i < ser.y.size(); ++i) {
      if (!std::isfinite(ser.x[i]) || !std::isfinite(ser.y[i])) {
        pen_down = false;
        continue;
      }
      path += (pen_down ? " L" : " M") + num(px(ser.x[i])) + ' ' + num(py(ser.y[i]));
      pen_down = true;
    }
    if (!path.empty())
      o << "<path d=\"" << path.substr(1) << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\"/>\n";
    if (!ser.label.empty()) {
      const double ly = top + 14 + 16 * static_cast<double>(s);
      o << "<line x1=\"" << W - right - 150 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - right - 130 << "\" y2=\""
        << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"1.8\"/>\n";
      o << "<text x=\"" << W - right - 125 << "\" y=\"" << ly << "\">" << detail::xml_escape(ser.label)
        << "</text>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

/// Supply against the landscape coordinate; censored nodes break the curve.
inline PlotSeries landscape_series(const Landscape& l, std::string label, bool by_terminal) {
  PlotSeries s;
  s.label = std::move(label);
  for (const auto& n : l.nodes) {
    s.x.push_back(by_terminal ? n.terminal : n.amplitude);
    s.y.push_back(n.unbounded ? std::numeric_limits<double>::quiet_NaN() : n.supply);
  }
  return s;
}

}  // namespace excitability
