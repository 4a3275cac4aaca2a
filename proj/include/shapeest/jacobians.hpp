#pragma once

#include "shapeest/kinematics.hpp"
#include "shapeest/types.hpp"

namespace shapeest {

// Threshold below which the homotopy is treated as degenerate: the two
// boundary end angles coincide and the state is not identifiable from the
// bending angle.
constexpr double kDegenerateHomotopyTol = 1e-9;

// 3x5 derivative of the measurement h_p = [px, pz, theta] with respect to
// w = [l, a1, a2, b1, b2]:
//   column l:  [sin(theta_s(l)), cos(theta_s(l)), kappa(l, t)]
//   a-block:   (1-t) * [ integral cos(theta_s) nu^T,
//                       -integral sin(theta_s) nu^T,  nu(l)^T ]
//   b-block:   same integrals scaled by t
// with nu(s) = [s, s^2/2].
Matrix35d identJacobian(double t, const ShapeParams& w,
                        const SegmentGeometry& g, const QuadratureSpec& q);

// 3x1 derivative of h_p with respect to the state t:
//   [ integral cos(theta_s) dtheta, -integral sin(theta_s) dtheta,
//     dtheta(l) ]
// where dtheta(s) = (b - a)^T nu(s).
Eigen::Vector3d geomJacobian(double t, const ShapeParams& w,
                             const SegmentGeometry& g,
                             const QuadratureSpec& q);

// 1x5 sensitivity of the state t = (theta_e - theta_ea)/(theta_eb - theta_ea)
// to w, holding the supplied theta_e fixed. theta_ea/theta_eb are the
// boundary end angles of w at s = L. Throws on a degenerate homotopy
// (|theta_eb - theta_ea| < kDegenerateHomotopyTol).
Eigen::Matrix<double, 1, 5> stateParamSensitivity(double theta_e,
                                                  const ShapeParams& w,
                                                  const SegmentGeometry& g);

// State-filter measurement matrix: geomJacobian at the predicted state and
// previous parameter estimate.
Eigen::Vector3d measurementMatrixState(double t_pred, const ShapeParams& w_prev,
                                       const SegmentGeometry& g,
                                       const QuadratureSpec& q);

// Parameter-filter measurement matrix, the total-derivative form
//   H_w = J_w(x, w) + J_x(x, w) * dx/dw(theta_e, w).
// theta_e is the bending level the state was inferred from; couple=false is
// a diagnostic mode that drops the dx/dw term (H_w reduces to J_w).
Matrix35d measurementMatrixParam(double x, const ShapeParams& w,
                                 double theta_e, const SegmentGeometry& g,
                                 const QuadratureSpec& q, bool couple = true);

}  // namespace shapeest
