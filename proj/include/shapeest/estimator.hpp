#pragma once

#include <Eigen/Dense>

#include "shapeest/types.hpp"

namespace shapeest {

struct GaussianBelief {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

struct NoiseConfig {
  Eigen::Matrix<double, 1, 1> Qv;  // state process covariance
  Matrix5d Qr;                     // parameter process covariance
  Eigen::Matrix3d Rn;              // state-filter measurement covariance
  Eigen::Matrix3d Re;              // parameter-filter measurement covariance
};

struct MeasurementSample {
  PlanarPose y;
  double u = 0.0;  // state process input consumed at this tick's time update
  int k = 0;
};

// Which state estimate the parameter filter's residual and Jacobian are
// evaluated at. The posterior of the current tick is the default; the
// previous tick's posterior is selectable for fidelity experiments but
// cannot satisfy the zero-noise replay property (the residual is nonzero
// whenever the truth moves between ticks).
enum class ParamInnovationState { kPosterior, kPrior, kPrevious };

// Bending level plugged into the state-parameter sensitivity inside H_w:
// the model-consistent angle at the linearization state, or the measured
// angle of the current sample.
enum class DxdwThetaSource { kModel, kMeasured };

// Where the per-tick process input u comes from when driving a whole run:
// the dataset's engineered column, or the one-step prediction built from
// the estimator's own previous angles.
enum class ProcessInputSource { kDataset, kPredicted };

struct EstimatorConfig {
  double x0 = 0.0;
  double Px0 = 1e-4;
  ShapeParams w0{60.0, -0.05 / 60.0, -0.01 / 60.0, -0.5 / 60.0,
                 -0.15 / 60.0};
  // The printed source table lists four diagonal entries for this 5x5
  // prior; the shipped default is a reconstruction (documented in the
  // README) that keeps the printed l entry and scales the four curvature
  // entries to (10% of |w0|)^2. Fully overridable in config files.
  Vector5d Pw0diag{
      (Vector5d() << 0.1, 6.9444444444444446e-9, 2.7777777777777779e-10,
       6.9444444444444441e-7, 6.25e-8)
          .finished()};
  double Qv = 1e-4;
  Vector5d QrDiag{(Vector5d() << 0.01, 0.0, 0.0, 0.0, 0.0).finished()};
  Eigen::Vector3d RnDiag{0.5, 0.5, 0.0006};
  Eigen::Vector3d ReDiag{0.25, 0.25, 0.0003};
  ParamInnovationState paramInnovationState = ParamInnovationState::kPosterior;
  DxdwThetaSource dxdwTheta = DxdwThetaSource::kModel;
  ProcessInputSource uSource = ProcessInputSource::kDataset;
  SegmentGeometry geometry;
  QuadratureSpec quadrature;

  NoiseConfig noise() const {
    NoiseConfig n;
    n.Qv(0, 0) = Qv;
    n.Qr = QrDiag.asDiagonal();
    n.Rn = RnDiag.asDiagonal();
    n.Re = ReDiag.asDiagonal();
    return n;
  }
};

struct DualEstimate {
  GaussianBelief state;   // dim 1: x = t
  GaussianBelief params;  // dim 5: w
  Eigen::Vector3d innovState = Eigen::Vector3d::Zero();
  Eigen::Vector3d innovParam = Eigen::Vector3d::Zero();
  Eigen::Matrix<double, 1, 3> Kx = Eigen::Matrix<double, 1, 3>::Zero();
  Eigen::Matrix<double, 5, 3> Kw = Eigen::Matrix<double, 5, 3>::Zero();
  int k = -1;  // last processed tick, -1 before the first step
  // Soft diagnostics: the state left its trusted extrapolation range, or an
  // innovation covariance solve was ill-conditioned (condition > 1e12).
  bool stateOutOfTrust = false;
  bool illConditioned = false;

  double x() const { return state.mean(0); }
  ShapeParams w() const { return ShapeParams::fromVector(params.mean); }
};

constexpr double kConditionWarnThreshold = 1e12;

// The belief over the sensor arc-length may wander outside [0, L]; model
// evaluations clamp it while the belief itself stays untouched.
inline ShapeParams clampSensorArc(ShapeParams w, const SegmentGeometry& g) {
  if (w.l < 0.0) w.l = 0.0;
  if (w.l > g.L) w.l = g.L;
  return w;
}

// Sets both beliefs from the config. Rejects covariance inputs that are not
// PSD (eigenvalue floor -1e-10).
DualEstimate initialize(const EstimatorConfig& cfg);

// x' = x + u, Px' = Px + Qv; w' = w, Pw' = Pw + Qr.
DualEstimate timeUpdate(const DualEstimate& est, double u,
                        const NoiseConfig& noise);

// Standard Kalman measurement update of the state belief with the
// measurement matrix H_x evaluated at (predicted x, previous w) and the
// nonlinear residual y - h_p(predicted x, previous w).
DualEstimate stateMeasurementUpdate(const DualEstimate& predicted,
                                    const PlanarPose& y,
                                    const ShapeParams& w_prev,
                                    const EstimatorConfig& cfg);

// Measurement update of the parameter belief: H_w from
// measurementMatrixParam at (x_lin, predicted w) and residual
// y - h_p(x_lin, predicted w). x_lin is whichever state estimate the caller
// conditions on (see ParamInnovationState).
DualEstimate paramMeasurementUpdate(const DualEstimate& est,
                                    const PlanarPose& y, double x_lin,
                                    const EstimatorConfig& cfg);

// One full tick: time update, state measurement update, parameter
// measurement update. Pure function of its arguments. Throws
// DivergenceError when a posterior stops being finite.
DualEstimate step(const DualEstimate& est, const MeasurementSample& sample,
                  const EstimatorConfig& cfg);

}  // namespace shapeest
