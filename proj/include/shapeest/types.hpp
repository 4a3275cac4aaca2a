#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace shapeest {

using Vector5d = Eigen::Matrix<double, 5, 1>;
using Matrix5d = Eigen::Matrix<double, 5, 5>;
using Matrix35d = Eigen::Matrix<double, 3, 5>;

// Millimeters and radians everywhere in the library; degrees exist only at
// the CLI/config boundary.

struct SegmentGeometry {
  double L = 60.0;       // maximum segment arc-length, mm (must be > 0)
  double theta0 = 0.0;   // base bending angle, rad
};

// Fixed-order composite Gauss-Legendre rule: `nodes` total nodes split into
// ceil(nodes/8) panels of an 8-point rule. Minimum 8 nodes.
struct QuadratureSpec {
  int nodes = 32;
};

// w = [l, a1, a2, b1, b2]: sensor arc-length (mm) plus the modal-factor
// pairs of the two boundary curvature polynomials kappa(s) = c1 + c2*s
// (units 1/mm and 1/mm^2).
struct ShapeParams {
  double l = 0.0;
  double a1 = 0.0, a2 = 0.0;
  double b1 = 0.0, b2 = 0.0;

  Vector5d asVector() const {
    Vector5d v;
    v << l, a1, a2, b1, b2;
    return v;
  }
  static ShapeParams fromVector(const Vector5d& v) {
    return {v[0], v[1], v[2], v[3], v[4]};
  }
};

// Measurement/prediction triple in the bending-plane frame.
struct PlanarPose {
  double px = 0.0;     // mm
  double pz = 0.0;     // mm
  double theta = 0.0;  // rad

  Eigen::Vector3d asVector() const { return {px, pz, theta}; }
  static PlanarPose fromVector(const Eigen::Vector3d& v) {
    return {v[0], v[1], v[2]};
  }
};

// The scalar interpolation state x = t is carried as plain double. Nominal
// domain is [0, 1]; the filter may leave it transiently. |t - 0.5| > 1.5 is
// outside the trusted extrapolation range (soft flag, see estimator).
constexpr double kStateTrustHalfWidth = 1.5;

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace shapeest
