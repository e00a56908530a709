#pragma once

// Static SVG overlays of a body and centred ellipses. Output is a pure
// function of the inputs (fixed precision, fixed element order).

#include <string>
#include <vector>

#include "mi_ellipse/body.hpp"
#include "mi_ellipse/conic.hpp"

namespace mie {

struct SvgEllipse {
  CenteredEllipse ellipse;
  std::string label;
  std::string color;
};

// View box [-2.2, 2.2]^2 with y pointing up.
std::string svg_document(const ConvexBody& body, const std::vector<SvgEllipse>& ellipses);

// Errors: IoError.
void emit_svg(const ConvexBody& body, const std::vector<SvgEllipse>& ellipses,
              const std::string& path);

}  // namespace mie
