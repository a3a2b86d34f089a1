#include "svg.hpp"

#include <cstdio>

namespace qvdp::cli {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

SvgCanvas::SvgCanvas() {
  body_ += "<rect x=\"-3\" y=\"-3\" width=\"6\" height=\"6\" fill=\"white\"/>\n";
  body_ += "<line x1=\"-3\" y1=\"0\" x2=\"3\" y2=\"0\" stroke=\"#bbb\" stroke-width=\"0.006\"/>\n";
  body_ += "<line x1=\"0\" y1=\"-3\" x2=\"0\" y2=\"3\" stroke=\"#bbb\" stroke-width=\"0.006\"/>\n";
}

void SvgCanvas::polyline(const std::vector<State>& pts, const std::string& color, double width) {
  if (pts.size() < 2) return;
  body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + num(width) + "\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) body_ += ' ';
    body_ += num(pts[i].x) + ',' + num(-pts[i].y);
  }
  body_ += "\"/>\n";
}

void SvgCanvas::circle(State c, double r, const std::string& stroke, const std::string& fill, double width) {
  body_ += "<circle cx=\"" + num(c.x) + "\" cy=\"" + num(-c.y) + "\" r=\"" + num(r) + "\" stroke=\"" + stroke +
           "\" fill=\"" + fill + "\" stroke-width=\"" + num(width) + "\"/>\n";
}

void SvgCanvas::square(State c, double half, const std::string& color) {
  body_ += "<rect x=\"" + num(c.x - half) + "\" y=\"" + num(-c.y - half) + "\" width=\"" + num(2 * half) +
           "\" height=\"" + num(2 * half) + "\" fill=\"" + color + "\"/>\n";
}

void SvgCanvas::text(State at, const std::string& s, double size) {
  body_ += "<text x=\"" + num(at.x) + "\" y=\"" + num(-at.y) + "\" font-size=\"" + num(size) +
           "\" font-family=\"sans-serif\">" + s + "</text>\n";
}

std::string SvgCanvas::str() const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-3 -3 6 6\" width=\"600\" height=\"600\">\n" + body_ +
         "</svg>\n";
}

}  // namespace qvdp::cli
