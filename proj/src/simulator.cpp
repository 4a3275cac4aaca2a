#include "shapeest/simulator.hpp"

#include <cmath>
#include <limits>

#include "shapeest/kinematics.hpp"
#include "shapeest/rng.hpp"

namespace shapeest {

namespace {

void validate(const SimConfig& cfg) {
  if (cfg.nSamples < 2) throw ConfigError("nSamples must be at least 2");
  if (cfg.noisePos < 0.0 || cfg.noiseAng < 0.0) {
    throw ConfigError("noise stds must be non-negative");
  }
  if (!(cfg.offsetFraction >= 0.0 && cfg.offsetFraction < 1.0)) {
    throw ConfigError("offsetFraction must lie in [0, 1)");
  }
}

// One user seed feeds two independent streams: first splitmix64 output
// seeds the offset stream, second seeds the noise stream.
void streamSeeds(std::uint64_t seed, std::uint64_t& offsets,
                 std::uint64_t& noise) {
  std::uint64_t state = seed;
  offsets = splitmix64(state);
  noise = splitmix64(state);
}

// Relative error with the zero-truth guard: NaN marks an excluded entry.
double relErr(double est, double truth) {
  if (truth == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::abs((est - truth) / truth);
}

// First index from which every defined entry stays <= threshold; -1 when
// the sequence never settles.
int settleTick(const std::vector<double>& rel, double threshold) {
  int tick = -1;
  for (int i = static_cast<int>(rel.size()) - 1; i >= 0; --i) {
    if (!std::isnan(rel[i]) && rel[i] > threshold) break;
    tick = i;
  }
  return tick;
}

}  // namespace

ShapeParams perturbParams(const ShapeParams& w0, const SimConfig& cfg,
                          const SegmentGeometry& g) {
  validate(cfg);
  std::uint64_t offSeed = 0, noiseSeed = 0;
  streamSeeds(cfg.seed, offSeed, noiseSeed);
  Prng rng(offSeed);
  Vector5d v = w0.asVector();
  for (int i = 0; i < 5; ++i) {
    v[i] *= 1.0 + rng.uniform(-cfg.offsetFraction, cfg.offsetFraction);
  }
  ShapeParams w = ShapeParams::fromVector(v);
  w = clampSensorArc(w, g);
  return w;
}

Dataset generateDataset(const ShapeParams& wTrue, const SimConfig& cfg,
                        const SegmentGeometry& g, const QuadratureSpec& q) {
  validate(cfg);
  std::uint64_t offSeed = 0, noiseSeed = 0;
  streamSeeds(cfg.seed, offSeed, noiseSeed);
  Prng rng(noiseSeed);

  const int n = cfg.nSamples;
  Dataset ds;
  ds.truthParams = wTrue;
  ds.truthStates.resize(n);
  ds.truthPoses.resize(n);
  ds.measurements.resize(n);
  for (int k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / (n - 1);
    ds.truthStates[k] = t;
    ds.truthPoses[k] = measure(t, wTrue, g, q);
    MeasurementSample& m = ds.measurements[k];
    m.k = k;
    m.y.px = ds.truthPoses[k].px + rng.gaussian(0.0, cfg.noisePos);
    m.y.pz = ds.truthPoses[k].pz + rng.gaussian(0.0, cfg.noisePos);
    m.y.theta = ds.truthPoses[k].theta + rng.gaussian(0.0, cfg.noiseAng);
  }

  double thetaEb = 0.0, thetaEa = 0.0;
  measuredBendExtremes(ds, thetaEb, thetaEa);
  ds.measurements[0].u = 0.0;
  for (int k = 1; k < n; ++k) {
    ds.measurements[k].u =
        processInput(ds.truthPoses[k].theta, ds.truthPoses[k - 1].theta,
                     thetaEb, thetaEa);
  }
  return ds;
}

double processInput(double theta_k, double theta_km1, double theta_eb_meas,
                    double theta_ea_meas) {
  const double den = theta_eb_meas - theta_ea_meas;
  if (den == 0.0) throw ModelError("process input denominator is zero");
  return (theta_k - theta_km1) / den;
}

void measuredBendExtremes(const Dataset& ds, double& theta_eb,
                          double& theta_ea) {
  if (ds.measurements.empty()) throw ModelError("empty dataset");
  std::size_t imax = 0, imin = 0;
  for (std::size_t i = 1; i < ds.measurements.size(); ++i) {
    const double mag = std::abs(ds.measurements[i].y.theta);
    if (mag > std::abs(ds.measurements[imax].y.theta)) imax = i;
    if (mag < std::abs(ds.measurements[imin].y.theta)) imin = i;
  }
  theta_eb = ds.measurements[imax].y.theta;
  theta_ea = ds.measurements[imin].y.theta;
}

std::vector<DualEstimate> runEstimator(const Dataset& ds,
                                       const EstimatorConfig& estCfg) {
  std::vector<DualEstimate> out;
  out.reserve(ds.measurements.size());
  DualEstimate est = initialize(estCfg);

  double thetaEb = 0.0, thetaEa = 0.0;
  if (estCfg.uSource == ProcessInputSource::kPredicted) {
    measuredBendExtremes(ds, thetaEb, thetaEa);
  }
  const ShapeParams w0eval = clampSensorArc(estCfg.w0, estCfg.geometry);
  double prevPredAngle =
      bendingAngle(w0eval.l, estCfg.x0, w0eval, estCfg.geometry);

  for (const MeasurementSample& sample : ds.measurements) {
    MeasurementSample s = sample;
    if (estCfg.uSource == ProcessInputSource::kPredicted) {
      const ShapeParams weval =
          clampSensorArc(est.w(), estCfg.geometry);
      const double predAngle =
          bendingAngle(weval.l, est.x(), weval, estCfg.geometry);
      s.u = (est.k < 0)
                ? 0.0
                : processInput(predAngle, prevPredAngle, thetaEb, thetaEa);
      prevPredAngle = predAngle;
    }
    est = step(est, s, estCfg);
    out.push_back(est);
  }
  return out;
}

Metrics scoreEstimates(const Dataset& ds,
                       const std::vector<DualEstimate>& estimates,
                       const SegmentGeometry& g, const QuadratureSpec& q,
                       double threshold) {
  if (ds.measurements.size() != estimates.size()) {
    throw ModelError("dataset and estimate sequences differ in length");
  }
  const int n = static_cast<int>(estimates.size());
  Metrics m;
  m.threshold = threshold;
  m.hasParams = ds.truthParamsValid;
  m.relT.resize(n);
  for (auto& v : m.relW) v.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (auto& v : m.relPose) v.resize(n);

  const Vector5d wTrue = ds.truthParams.asVector();
  for (int k = 0; k < n; ++k) {
    m.relT[k] = relErr(estimates[k].x(), ds.truthStates[k]);
    if (std::isnan(m.relT[k])) ++m.excludedT;
    if (m.hasParams) {
      const Vector5d w = estimates[k].params.mean;
      for (int i = 0; i < 5; ++i) {
        m.relW[i][k] = relErr(w[i], wTrue[i]);
        if (std::isnan(m.relW[i][k])) ++m.excludedW[i];
      }
    }
    const ShapeParams weval = clampSensorArc(estimates[k].w(), g);
    const PlanarPose pose = measure(estimates[k].x(), weval, g, q);
    const Eigen::Vector3d est = pose.asVector();
    const Eigen::Vector3d truth = ds.truthPoses[k].asVector();
    for (int i = 0; i < 3; ++i) {
      m.relPose[i][k] = relErr(est[i], truth[i]);
      if (std::isnan(m.relPose[i][k])) ++m.excludedPose[i];
    }
  }
  m.convergenceT = settleTick(m.relT, threshold);
  if (m.hasParams) {
    for (int i = 0; i < 5; ++i) {
      m.convergenceW[i] = settleTick(m.relW[i], threshold);
    }
  }
  for (int i = 0; i < 3; ++i) {
    m.convergencePose[i] = settleTick(m.relPose[i], threshold);
  }
  return m;
}

WorkflowResult runWorkflow(const SimConfig& simCfg,
                           const EstimatorConfig& estCfg, double threshold) {
  WorkflowResult res;
  const ShapeParams wTrue =
      perturbParams(simCfg.wNominal, simCfg, estCfg.geometry);
  res.dataset =
      generateDataset(wTrue, simCfg, estCfg.geometry, estCfg.quadrature);
  res.estimates = runEstimator(res.dataset, estCfg);
  res.metrics = scoreEstimates(res.dataset, res.estimates, estCfg.geometry,
                               estCfg.quadrature, threshold);
  return res;
}

}  // namespace shapeest
