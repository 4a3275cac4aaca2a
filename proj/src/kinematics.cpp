#include "shapeest/kinematics.hpp"

#include <cmath>

namespace shapeest {

namespace {

void checkArc(double s, const SegmentGeometry& g, const char* what) {
  if (!(s >= 0.0 && s <= g.L)) {
    throw ModelError(std::string(what) + " outside [0, L]");
  }
}

}  // namespace

double curvature(double s, double t, const ShapeParams& w,
                 const SegmentGeometry& g) {
  checkArc(s, g, "arc-length s");
  return t * (w.b1 + w.b2 * s) + (1.0 - t) * (w.a1 + w.a2 * s);
}

double bendingAngle(double s, double t, const ShapeParams& w,
                    const SegmentGeometry& g) {
  checkArc(s, g, "arc-length s");
  const double half = 0.5 * s * s;
  return g.theta0 + (1.0 - t) * (w.a1 * s + w.a2 * half) +
         t * (w.b1 * s + w.b2 * half);
}

double bendingAngleInterp(double t, double theta_ea, double theta_eb) {
  return theta_ea + t * (theta_eb - theta_ea);
}

void generatorEndAngles(const ShapeParams& w, const SegmentGeometry& g,
                        double& theta_ea, double& theta_eb) {
  theta_ea = bendingAngle(g.L, 0.0, w, g);
  theta_eb = bendingAngle(g.L, 1.0, w, g);
}

void position(double l, double t, const ShapeParams& w,
              const SegmentGeometry& g, const QuadratureSpec& q, double& px,
              double& pz) {
  checkArc(l, g, "arc-length l");
  const int panels = panelCount(q);
  const double h = l / panels;
  double sx = 0.0, sz = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    const double half = 0.5 * h;
    double ax = 0.0, az = 0.0;
    for (int i = 0; i < 8; ++i) {
      const double s = mid + half * kGl8Nodes[i];
      const double th = g.theta0 +
                        (1.0 - t) * (w.a1 * s + w.a2 * 0.5 * s * s) +
                        t * (w.b1 * s + w.b2 * 0.5 * s * s);
      ax += kGl8Weights[i] * std::sin(th);
      az += kGl8Weights[i] * std::cos(th);
    }
    sx += ax * half;
    sz += az * half;
  }
  px = sx;
  pz = sz;
}

PlanarPose measure(double t, const ShapeParams& w, const SegmentGeometry& g,
                   const QuadratureSpec& q) {
  PlanarPose pose;
  position(w.l, t, w, g, q, pose.px, pose.pz);
  pose.theta = bendingAngle(w.l, t, w, g);
  return pose;
}

}  // namespace shapeest
