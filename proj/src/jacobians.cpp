#include "shapeest/jacobians.hpp"

#include <cmath>

#include "shapeest/quadrature.hpp"

namespace shapeest {

namespace {

// One pass over the composite rule accumulating every integral the two
// Jacobians need. Node order is fixed for bit-deterministic results.
struct TrigMoments {
  double sinNu1 = 0.0, sinNu2 = 0.0;  // integral sin(theta_s) * [s, s^2/2]
  double cosNu1 = 0.0, cosNu2 = 0.0;  // integral cos(theta_s) * [s, s^2/2]
  double sinDth = 0.0, cosDth = 0.0;  // integral {sin,cos}(theta_s) * dtheta
};

TrigMoments trigMoments(double l, double t, const ShapeParams& w,
                        const SegmentGeometry& g, const QuadratureSpec& q) {
  const int panels = panelCount(q);
  const double h = l / panels;
  TrigMoments m;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    const double half = 0.5 * h;
    TrigMoments pm;
    for (int i = 0; i < 8; ++i) {
      const double s = mid + half * kGl8Nodes[i];
      const double nu1 = s;
      const double nu2 = 0.5 * s * s;
      const double th =
          g.theta0 + (1.0 - t) * (w.a1 * nu1 + w.a2 * nu2) +
          t * (w.b1 * nu1 + w.b2 * nu2);
      const double dth = (w.b1 - w.a1) * nu1 + (w.b2 - w.a2) * nu2;
      const double sn = std::sin(th);
      const double cs = std::cos(th);
      const double wt = kGl8Weights[i];
      pm.sinNu1 += wt * sn * nu1;
      pm.sinNu2 += wt * sn * nu2;
      pm.cosNu1 += wt * cs * nu1;
      pm.cosNu2 += wt * cs * nu2;
      pm.sinDth += wt * sn * dth;
      pm.cosDth += wt * cs * dth;
    }
    m.sinNu1 += pm.sinNu1 * half;
    m.sinNu2 += pm.sinNu2 * half;
    m.cosNu1 += pm.cosNu1 * half;
    m.cosNu2 += pm.cosNu2 * half;
    m.sinDth += pm.sinDth * half;
    m.cosDth += pm.cosDth * half;
  }
  return m;
}

}  // namespace

Matrix35d identJacobian(double t, const ShapeParams& w,
                        const SegmentGeometry& g, const QuadratureSpec& q) {
  const double l = w.l;
  const TrigMoments m = trigMoments(l, t, w, g, q);
  const double thl = bendingAngle(l, t, w, g);
  const double nu1 = l;
  const double nu2 = 0.5 * l * l;
  const double ta = 1.0 - t;

  Matrix35d jw;
  jw(0, 0) = std::sin(thl);
  jw(1, 0) = std::cos(thl);
  jw(2, 0) = curvature(l, t, w, g);
  jw(0, 1) = ta * m.cosNu1;
  jw(0, 2) = ta * m.cosNu2;
  jw(1, 1) = -ta * m.sinNu1;
  jw(1, 2) = -ta * m.sinNu2;
  jw(2, 1) = ta * nu1;
  jw(2, 2) = ta * nu2;
  jw(0, 3) = t * m.cosNu1;
  jw(0, 4) = t * m.cosNu2;
  jw(1, 3) = -t * m.sinNu1;
  jw(1, 4) = -t * m.sinNu2;
  jw(2, 3) = t * nu1;
  jw(2, 4) = t * nu2;
  return jw;
}

Eigen::Vector3d geomJacobian(double t, const ShapeParams& w,
                             const SegmentGeometry& g,
                             const QuadratureSpec& q) {
  const double l = w.l;
  const TrigMoments m = trigMoments(l, t, w, g, q);
  const double dthl = (w.b1 - w.a1) * l + (w.b2 - w.a2) * 0.5 * l * l;
  return {m.cosDth, -m.sinDth, dthl};
}

Eigen::Matrix<double, 1, 5> stateParamSensitivity(double theta_e,
                                                  const ShapeParams& w,
                                                  const SegmentGeometry& g) {
  double ea = 0.0, eb = 0.0;
  generatorEndAngles(w, g, ea, eb);
  const double d = eb - ea;
  if (std::abs(d) < kDegenerateHomotopyTol) {
    throw ModelError("degenerate homotopy: boundary end angles coincide");
  }
  const double dt_dea = (theta_e - eb) / (d * d);
  const double dt_deb = -(theta_e - ea) / (d * d);
  const double nu1 = g.L;
  const double nu2 = 0.5 * g.L * g.L;
  Eigen::Matrix<double, 1, 5> dxdw;
  dxdw << 0.0, dt_dea * nu1, dt_dea * nu2, dt_deb * nu1, dt_deb * nu2;
  return dxdw;
}

Eigen::Vector3d measurementMatrixState(double t_pred,
                                       const ShapeParams& w_prev,
                                       const SegmentGeometry& g,
                                       const QuadratureSpec& q) {
  return geomJacobian(t_pred, w_prev, g, q);
}

Matrix35d measurementMatrixParam(double x, const ShapeParams& w,
                                 double theta_e, const SegmentGeometry& g,
                                 const QuadratureSpec& q, bool couple) {
  Matrix35d hw = identJacobian(x, w, g, q);
  if (couple) {
    hw += geomJacobian(x, w, g, q) * stateParamSensitivity(theta_e, w, g);
  }
  return hw;
}

}  // namespace shapeest
