#pragma once

#include <array>
#include <cmath>

#include "shapeest/types.hpp"

namespace shapeest {

// 8-point Gauss-Legendre rule on [-1, 1], nodes ascending.
inline constexpr std::array<double, 8> kGl8Nodes = {
    -0.9602898564975362, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975362};
inline constexpr std::array<double, 8> kGl8Weights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

inline int panelCount(const QuadratureSpec& q) {
  if (q.nodes < 8) throw ModelError("quadrature rule needs at least 8 nodes");
  return (q.nodes + 7) / 8;
}

// Composite integral of f over [0, upper]. Panel and node order are fixed so
// results are bit-deterministic for identical inputs.
template <typename F>
double integrate(F&& f, double upper, const QuadratureSpec& q) {
  const int panels = panelCount(q);
  const double h = upper / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    const double half = 0.5 * h;
    double panelAcc = 0.0;
    for (int i = 0; i < 8; ++i) {
      panelAcc += kGl8Weights[i] * f(mid + half * kGl8Nodes[i]);
    }
    acc += panelAcc * half;
  }
  return acc;
}

}  // namespace shapeest
