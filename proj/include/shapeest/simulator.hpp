#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "shapeest/estimator.hpp"
#include "shapeest/types.hpp"

namespace shapeest {

struct SimConfig {
  ShapeParams wNominal{60.0, -0.05 / 60.0, -0.01 / 60.0, -0.5 / 60.0,
                       -0.15 / 60.0};
  double offsetFraction = 0.2;  // per-component relative perturbation bound
  int nSamples = 500;
  double noisePos = 0.5;                    // mm, std
  double noiseAng = 1.0 * M_PI / 180.0;     // rad, std
  std::uint64_t seed = 7;
};

struct Dataset {
  std::vector<double> truthStates;  // t_k, evenly spaced on [0, 1]
  ShapeParams truthParams;          // constant over the run
  bool truthParamsValid = true;     // false when read back from CSV
  std::vector<MeasurementSample> measurements;
  std::vector<PlanarPose> truthPoses;
};

// Per-tick relative errors |(est - true)/true|; NaN marks entries whose
// truth is zero (excluded and counted). convergence* is the first tick from
// which the quantity stays at or under the threshold (-1 if never).
struct Metrics {
  double threshold = 0.05;
  std::vector<double> relT;
  std::array<std::vector<double>, 5> relW;
  std::array<std::vector<double>, 3> relPose;
  int excludedT = 0;
  std::array<int, 5> excludedW{};
  std::array<int, 3> excludedPose{};
  int convergenceT = -1;
  std::array<int, 5> convergenceW{-1, -1, -1, -1, -1};
  std::array<int, 3> convergencePose{-1, -1, -1};
  bool hasParams = true;
};

struct WorkflowResult {
  Dataset dataset;
  std::vector<DualEstimate> estimates;
  Metrics metrics;
};

// Applies one random relative offset per component, uniform within
// +-offsetFraction, drawn from the offset stream of cfg.seed; the sensor
// arc-length is clamped to [0, L].
ShapeParams perturbParams(const ShapeParams& w0, const SimConfig& cfg,
                          const SegmentGeometry& g);

// Evenly spaced truth sweep t in [0, 1] with noisy measurements and the
// engineered process input stored per row (first row u = 0; the stored u is
// consumed at that row's time update).
Dataset generateDataset(const ShapeParams& wTrue, const SimConfig& cfg,
                        const SegmentGeometry& g, const QuadratureSpec& q);

// u = (theta_k - theta_km1) / (theta_eb_meas - theta_ea_meas). Throws on a
// zero denominator.
double processInput(double theta_k, double theta_km1, double theta_eb_meas,
                    double theta_ea_meas);

// Most-bent / least-bent measured angles of a dataset, selected by angle
// magnitude (the sweep may bend to negative angles; signed min/max would
// flip the denominator sign). Returns {theta_eb_meas, theta_ea_meas}.
void measuredBendExtremes(const Dataset& ds, double& theta_eb,
                          double& theta_ea);

// Scores per-tick relative errors of the state, parameters (when truth
// params are known), and the pose predicted from the posterior means.
Metrics scoreEstimates(const Dataset& ds,
                       const std::vector<DualEstimate>& estimates,
                       const SegmentGeometry& g, const QuadratureSpec& q,
                       double threshold = 0.05);

// Full pipeline: perturb nominal parameters, generate a dataset, run the
// dual EKF over it, score against truth.
WorkflowResult runWorkflow(const SimConfig& simCfg,
                           const EstimatorConfig& estCfg,
                           double threshold = 0.05);

// Dual EKF over an existing dataset (used by runWorkflow and the CLI
// estimate command).
std::vector<DualEstimate> runEstimator(const Dataset& ds,
                                       const EstimatorConfig& estCfg);

}  // namespace shapeest
