#pragma once

#include <string>
#include <vector>

#include "qvdp/model.hpp"

namespace qvdp::cli {

/// Minimal SVG writer over the fixed world window [-3, 3]^2 (y up).
class SvgCanvas {
 public:
  SvgCanvas();

  void polyline(const std::vector<State>& pts, const std::string& color, double width = 0.012);
  void circle(State c, double r, const std::string& stroke, const std::string& fill, double width = 0.012);
  void square(State c, double half, const std::string& color);
  void text(State at, const std::string& s, double size = 0.12);

  [[nodiscard]] std::string str() const;

 private:
  std::string body_;
};

}  // namespace qvdp::cli
