#pragma once

#include <cmath>

namespace bubblelab {

inline constexpr double kBorderlineTol = 1e-9;

/// R < G_d < G, strict. Inequalities within kBorderlineTol are flagged and
/// never count as holding.
struct NecessityReport {
  double R = 0.0;
  double G_d = 0.0;
  double G = 0.0;
  bool holds = false;
  bool borderline = false;
};

inline NecessityReport classify_necessity(double R, double G_d, double G) {
  NecessityReport r{R, G_d, G, false, false};
  r.borderline = (G_d > 0.0 && std::abs(G_d - R) <= kBorderlineTol) || std::abs(G - G_d) <= kBorderlineTol;
  r.holds = !r.borderline && R < G_d && G_d < G;
  return r;
}

}  // namespace bubblelab
