#include "mi_ellipse/svg.hpp"

#include <cmath>
#include <cstdio>

#include "mi_ellipse/io.hpp"

namespace mie {

namespace {

constexpr int kOutlinePoints = 720;

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  return s == "-0.000000" ? "0.000000" : s;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

}  // namespace

std::string svg_document(const ConvexBody& body, const std::vector<SvgEllipse>& ellipses) {
  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-2.2 -2.2 4.4 4.4\" "
       "width=\"440\" height=\"440\">\n";
  s += "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"0.012\">\n";
  s += "<line x1=\"-2.2\" y1=\"0\" x2=\"2.2\" y2=\"0\" stroke=\"#cccccc\"/>\n";
  s += "<line x1=\"0\" y1=\"-2.2\" x2=\"0\" y2=\"2.2\" stroke=\"#cccccc\"/>\n";

  std::vector<Vec2> outline;
  if (body.kind() == ConvexBody::Kind::Polygon) {
    outline = body.vertices();
  } else {
    for (int k = 0; k < kOutlinePoints; ++k) {
      outline.push_back(body.boundary_point(kTwoPi * k / kOutlinePoints));
    }
  }
  s += "<polygon id=\"body\" fill=\"#e8e8e8\" stroke=\"#000000\" points=\"";
  for (std::size_t k = 0; k < outline.size(); ++k) {
    if (k) s += ' ';
    s += fixed(outline[k].x()) + ',' + fixed(outline[k].y());
  }
  s += "\"/>\n";

  for (const SvgEllipse& e : ellipses) {
    const double k = kPi / e.ellipse.area();
    const double rx = 1.0 / std::sqrt(std::exp(e.ellipse.t()) * k);
    const double ry = 1.0 / std::sqrt(std::exp(-e.ellipse.t()) * k);
    const double deg = e.ellipse.phi() * 180.0 / kPi;
    s += "<ellipse cx=\"0\" cy=\"0\" rx=\"" + fixed(rx) + "\" ry=\"" + fixed(ry) +
         "\" transform=\"rotate(" + fixed(deg) + ")\" stroke=\"" + escape(e.color) + "\"><title>" +
         escape(e.label) + "</title></ellipse>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

void emit_svg(const ConvexBody& body, const std::vector<SvgEllipse>& ellipses,
              const std::string& path) {
  write_text_file(path, svg_document(body, ellipses));
}

}  // namespace mie
