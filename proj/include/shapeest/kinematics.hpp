#pragma once

#include "shapeest/quadrature.hpp"
#include "shapeest/types.hpp"

namespace shapeest {

// Interpolated curvature kappa(s, t) = t*(b1 + b2*s) + (1-t)*(a1 + a2*s),
// 1/mm. Rejects s outside [0, L].
double curvature(double s, double t, const ShapeParams& w,
                 const SegmentGeometry& g);

// Bending angle theta_s(s) = theta0 + (1-t)*(a1*s + a2*s^2/2)
//                                   + t*(b1*s + b2*s^2/2), rad.
// Closed form; the curvature is polynomial so no quadrature is involved.
// Rejects s outside [0, L].
double bendingAngle(double s, double t, const ShapeParams& w,
                    const SegmentGeometry& g);

// Affine interpolation theta_ea + t*(theta_eb - theta_ea). Equals
// bendingAngle(L, t, w) when the end angles come from the same w.
double bendingAngleInterp(double t, double theta_ea, double theta_eb);

// End angles of the two boundary curves at s = L, i.e. bendingAngle at
// t = 0 and t = 1.
void generatorEndAngles(const ShapeParams& w, const SegmentGeometry& g,
                        double& theta_ea, double& theta_eb);

// In-plane position of the backbone point at arc-length l:
//   px = integral_0^l sin(theta_s) ds,  pz = integral_0^l cos(theta_s) ds.
// Composite fixed-order quadrature. Rejects l outside [0, L].
void position(double l, double t, const ShapeParams& w,
              const SegmentGeometry& g, const QuadratureSpec& q, double& px,
              double& pz);

// Measurement model h_p(x, w) = [px(l), pz(l), theta_s(l)] at the sensor
// arc-length w.l.
PlanarPose measure(double t, const ShapeParams& w, const SegmentGeometry& g,
                   const QuadratureSpec& q);

}  // namespace shapeest
