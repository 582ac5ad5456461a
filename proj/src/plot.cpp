#include "lac/plot.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>

namespace lac {

namespace {

constexpr double kCanvas = 800.0;
constexpr double kMargin = 20.0;

constexpr std::array<const char*, 10> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

const char* color_for(const SimTrace& trace, const AgentSummary& a) {
  if (trace.header.scenario == "reflection") return a.group == 0 ? "#d62728" : "#1f77b4";
  if (trace.header.scenario == "circle") return kPalette[a.group % kPalette.size()];
  return kPalette[a.id % kPalette.size()];
}

}  // namespace

std::string render_svg(const SimTrace& trace) {
  const double r = trace.header.radius;
  double lo_x = std::numeric_limits<double>::infinity();
  double lo_y = lo_x;
  double hi_x = -lo_x;
  double hi_y = -lo_x;
  auto grow = [&](const Vec2& p) {
    lo_x = std::min(lo_x, p.x() - r);
    lo_y = std::min(lo_y, p.y() - r);
    hi_x = std::max(hi_x, p.x() + r);
    hi_y = std::max(hi_y, p.y() + r);
  };
  for (const auto& a : trace.agents) {
    grow(a.start);
    grow(a.target);
  }
  for (const auto& rec : trace.steps) {
    for (const auto& s : rec.agents) grow(s.position);
  }
  if (trace.agents.empty()) {
    lo_x = lo_y = -1.0;
    hi_x = hi_y = 1.0;
  }

  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  const double scale = (kCanvas - 2.0 * kMargin) / span;
  const double width = (hi_x - lo_x) * scale + 2.0 * kMargin;
  const double height = (hi_y - lo_y) * scale + 2.0 * kMargin;
  auto sx = [&](double x) { return kMargin + (x - lo_x) * scale; };
  auto sy = [&](double y) { return kMargin + (hi_y - y) * scale; };  // y axis points up

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<title>" + trace.header.policy + " / " + trace.header.scenario + "</title>\n";

  out += "<g fill=\"none\" stroke-width=\"1.2\" stroke-opacity=\"0.8\">\n";
  for (std::size_t i = 0; i < trace.agents.size(); ++i) {
    std::string points;
    double last_x = std::numeric_limits<double>::quiet_NaN();
    double last_y = last_x;
    std::size_t kept = 0;
    for (std::size_t s = 0; s < trace.steps.size(); ++s) {
      const Vec2& p = trace.steps[s].agents[i].position;
      const double x = sx(p.x());
      const double y = sy(p.y());
      const bool last = s + 1 == trace.steps.size();
      // Drop sub-half-pixel moves; always keep the final point.
      if (kept > 0 && !last && std::abs(x - last_x) < 0.5 && std::abs(y - last_y) < 0.5) continue;
      if (kept > 0) points += ' ';
      points += num(x) + "," + num(y);
      last_x = x;
      last_y = y;
      ++kept;
    }
    if (kept < 2) continue;
    out += "<polyline stroke=\"" + std::string(color_for(trace, trace.agents[i])) +
           "\" points=\"" + points + "\"/>\n";
  }
  out += "</g>\n";

  const double marker = std::max(r * scale, 1.5);
  out += "<g stroke-width=\"1\">\n";
  for (const auto& a : trace.agents) {
    const char* c = color_for(trace, a);
    out += "<circle cx=\"" + num(sx(a.start.x())) + "\" cy=\"" + num(sy(a.start.y())) +
           "\" r=\"" + num(marker) + "\" fill=\"" + c + "\" fill-opacity=\"0.35\" stroke=\"black\"/>\n";
    out += "<rect x=\"" + num(sx(a.target.x()) - 0.5 * marker) + "\" y=\"" +
           num(sy(a.target.y()) - 0.5 * marker) + "\" width=\"" + num(marker) + "\" height=\"" +
           num(marker) + "\" fill=\"" + c + "\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace lac
