#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>

namespace shapeest {

// Central-difference Jacobian of f: R^n -> R^m, step 1e-6 * max(1, |x_i|)
// per coordinate. Used as the validation oracle for the analytic Jacobians.
inline Eigen::MatrixXd centralDifference(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double stepScale = 1e-6) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd jac(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = stepScale * std::max(1.0, std::abs(x[i]));
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    jac.col(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return jac;
}

// Largest |analytic - numeric| entry scaled by the largest |numeric| entry;
// a matrix-level relative deviation that stays meaningful for near-zero
// entries.
inline double relativeDeviation(const Eigen::MatrixXd& analytic,
                                const Eigen::MatrixXd& numeric) {
  const double scale = std::max(numeric.cwiseAbs().maxCoeff(), 1e-300);
  return (analytic - numeric).cwiseAbs().maxCoeff() / scale;
}

}  // namespace shapeest
