#include "shapeest/estimator.hpp"

#include <cmath>

#include "shapeest/jacobians.hpp"
#include "shapeest/kinematics.hpp"

namespace shapeest {

namespace {

void requirePsd(const Eigen::MatrixXd& m, const char* what) {
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw ConfigError(std::string(what) + " is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw ConfigError(std::string(what) + " is not positive semi-definite");
  }
}

// Solves K = P H^T S^-1 with a symmetry-exploiting direct solve; flags an
// ill-conditioned S and rejects a non-invertible one.
template <int N>
Eigen::Matrix<double, N, 3> gainSolve(
    const Eigen::Matrix<double, 3, N>& h, const Eigen::MatrixXd& p,
    const Eigen::Matrix3d& s, bool& illConditioned) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(s);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  if (!(lmin > 0.0) || !std::isfinite(lmax)) {
    throw ModelError("innovation covariance is not invertible");
  }
  if (lmax / lmin > kConditionWarnThreshold) illConditioned = true;
  // K^T = S^-1 (H P) because P is symmetric.
  return s.ldlt().solve(h * p).transpose();
}

void requireFinite(const DualEstimate& est) {
  if (!est.state.mean.allFinite() || !est.state.cov.allFinite() ||
      !est.params.mean.allFinite() || !est.params.cov.allFinite()) {
    throw DivergenceError("estimator produced a non-finite posterior");
  }
}

}  // namespace

DualEstimate initialize(const EstimatorConfig& cfg) {
  if (!(cfg.Px0 >= 0.0)) {
    throw ConfigError("initial state covariance is not positive semi-definite");
  }
  DualEstimate est;
  est.state.mean = Eigen::VectorXd::Constant(1, cfg.x0);
  est.state.cov = Eigen::MatrixXd::Constant(1, 1, cfg.Px0);
  est.params.mean = cfg.w0.asVector();
  est.params.cov = Eigen::MatrixXd(cfg.Pw0diag.asDiagonal());
  requirePsd(est.params.cov, "initial parameter covariance");
  const NoiseConfig n = cfg.noise();
  requirePsd(n.Qr, "parameter process covariance");
  requirePsd(n.Rn, "state measurement covariance");
  requirePsd(n.Re, "parameter measurement covariance");
  if (!(cfg.Qv >= 0.0)) {
    throw ConfigError("state process covariance is not positive semi-definite");
  }
  return est;
}

DualEstimate timeUpdate(const DualEstimate& est, double u,
                        const NoiseConfig& noise) {
  DualEstimate out = est;
  out.state.mean(0) += u;
  out.state.cov(0, 0) += noise.Qv(0, 0);
  out.params.cov += noise.Qr;
  return out;
}

DualEstimate stateMeasurementUpdate(const DualEstimate& predicted,
                                    const PlanarPose& y,
                                    const ShapeParams& w_prev,
                                    const EstimatorConfig& cfg) {
  const ShapeParams weval = clampSensorArc(w_prev, cfg.geometry);
  const double xc = predicted.state.mean(0);
  const Eigen::Vector3d hx =
      measurementMatrixState(xc, weval, cfg.geometry, cfg.quadrature);
  const double pxc = predicted.state.cov(0, 0);
  const Eigen::Matrix3d s =
      hx * pxc * hx.transpose() + Eigen::Matrix3d(cfg.RnDiag.asDiagonal());

  DualEstimate out = predicted;
  const Eigen::Matrix<double, 3, 1> hmat = hx;
  const Eigen::Matrix<double, 1, 3> kx =
      gainSolve<1>(hmat, predicted.state.cov, s, out.illConditioned);
  out.innovState =
      y.asVector() -
      measure(xc, weval, cfg.geometry, cfg.quadrature).asVector();
  out.Kx = kx;
  out.state.mean(0) = xc + (kx * out.innovState)(0);
  out.state.cov(0, 0) = (1.0 - (kx * hx)(0)) * pxc;
  out.stateOutOfTrust =
      std::abs(out.state.mean(0) - 0.5) > kStateTrustHalfWidth;
  return out;
}

DualEstimate paramMeasurementUpdate(const DualEstimate& est,
                                    const PlanarPose& y, double x_lin,
                                    const EstimatorConfig& cfg) {
  const ShapeParams wc = ShapeParams::fromVector(est.params.mean);
  const ShapeParams weval = clampSensorArc(wc, cfg.geometry);
  double theta_e;
  if (cfg.dxdwTheta == DxdwThetaSource::kMeasured) {
    theta_e = y.theta;
  } else {
    double ea = 0.0, eb = 0.0;
    generatorEndAngles(weval, cfg.geometry, ea, eb);
    theta_e = bendingAngleInterp(x_lin, ea, eb);
  }
  const Matrix35d hw = measurementMatrixParam(
      x_lin, weval, theta_e, cfg.geometry, cfg.quadrature, true);
  const Eigen::Matrix3d sw =
      hw * est.params.cov * hw.transpose() +
      Eigen::Matrix3d(cfg.ReDiag.asDiagonal());

  DualEstimate out = est;
  const Eigen::Matrix<double, 5, 3> kw =
      gainSolve<5>(hw, est.params.cov, sw, out.illConditioned);
  out.innovParam =
      y.asVector() -
      measure(x_lin, weval, cfg.geometry, cfg.quadrature).asVector();
  out.Kw = kw;
  out.params.mean = wc.asVector() + kw * out.innovParam;
  const Matrix5d post =
      (Matrix5d::Identity() - kw * hw) * est.params.cov;
  out.params.cov = 0.5 * (post + post.transpose());
  return out;
}

DualEstimate step(const DualEstimate& est, const MeasurementSample& sample,
                  const EstimatorConfig& cfg) {
  const double xPrev = est.state.mean(0);
  const ShapeParams wPrev = ShapeParams::fromVector(est.params.mean);
  const DualEstimate predicted = timeUpdate(est, sample.u, cfg.noise());
  DualEstimate afterState =
      stateMeasurementUpdate(predicted, sample.y, wPrev, cfg);
  double xLin = afterState.state.mean(0);
  if (cfg.paramInnovationState == ParamInnovationState::kPrior) {
    xLin = predicted.state.mean(0);
  } else if (cfg.paramInnovationState == ParamInnovationState::kPrevious) {
    xLin = xPrev;
  }
  DualEstimate out = paramMeasurementUpdate(afterState, sample.y, xLin, cfg);
  out.k = sample.k;
  requireFinite(out);
  return out;
}

}  // namespace shapeest
