#include "ghkit/svg.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <sstream>

namespace ghkit {

namespace {

std::string escape_xml(const std::string& s) {
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

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string render_cover_svg(const EuclideanPointSet& pts, const std::vector<SubsetFamily>& families,
                             const std::string& title) {
  constexpr std::array<const char*, 5> palette{"#d62728", "#1f4fd6", "#2ca02c", "#ff7f0e", "#9467bd"};
  constexpr double kSize = 640.0;
  constexpr double kMargin = 24.0;

  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  for (const auto& p : pts.points()) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  const double span = std::max({x1 - x0, y1 - y0, 1e-12});
  const double s = (kSize - 2 * kMargin) / span;
  auto sx = [&](double x) { return kMargin + (x - x0) * s; };
  auto sy = [&](double y) { return kSize - kMargin - (y - y0) * s; };
  const double radius = std::clamp(0.12 * s * std::min(1.0, span / std::sqrt(static_cast<double>(pts.size()))),
                                   0.8, 6.0);

  std::vector<char> drawn(pts.size(), 0);
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
      << "  <title>" << escape_xml(title) << "</title>\n"
      << "  <rect x=\"0\" y=\"0\" width=\"" << kSize << "\" height=\"" << kSize << "\" fill=\"white\"/>\n";
  for (std::size_t f = 0; f < families.size(); ++f) {
    const auto& fam = families[f];
    const char* colour = palette[f % palette.size()];
    for (std::size_t m = 0; m < fam.size(); ++m) {
      out << "  <g class=\"piece\" data-family=\"" << escape_xml(fam.label()) << "\" data-member=\"" << m
          << "\" fill=\"" << colour << "\">\n";
      for (std::size_t i : fam.members()[m]) {
        out << "    <circle cx=\"" << num(sx(pts.point(i).x)) << "\" cy=\"" << num(sy(pts.point(i).y))
            << "\" r=\"" << num(radius) << "\"/>\n";
        drawn[i] = 1;
      }
      out << "  </g>\n";
    }
  }
  out << "  <g class=\"uncovered\" fill=\"#999999\">\n";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (drawn[i]) continue;
    out << "    <circle cx=\"" << num(sx(pts.point(i).x)) << "\" cy=\"" << num(sy(pts.point(i).y))
        << "\" r=\"" << num(radius) << "\"/>\n";
  }
  out << "  </g>\n</svg>\n";
  return out.str();
}

}  // namespace ghkit
