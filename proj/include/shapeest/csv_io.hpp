#pragma once

#include <string>
#include <vector>

#include "shapeest/estimator.hpp"
#include "shapeest/simulator.hpp"

namespace shapeest {

// Floating-point cells use 12 significant digits throughout.
std::string formatG12(double v);

// Dataset CSV: header
// k,t_true,y_px,y_pz,y_theta,truth_px,truth_pz,truth_theta,u
// one row per tick, angles in radians.
void writeDatasetCsv(const std::string& path, const Dataset& ds);

// Strict reader for the same schema; malformed input raises SchemaError
// naming the offending row. truthParams are not stored in the file, so the
// returned dataset has truthParamsValid = false.
Dataset readDatasetCsv(const std::string& path);

// Estimates CSV: header
// k,x_hat,w_l,w_a1,w_a2,w_b1,w_b2,Px,Pw_diag_1,...,Pw_diag_5,
// innov_px,innov_pz,innov_theta
void writeEstimatesCsv(const std::string& path,
                       const std::vector<DualEstimate>& estimates);

// Reads back the posterior means an estimates CSV stores (covariances come
// back as diagonals; gains and flags are not serialized).
std::vector<DualEstimate> readEstimatesCsv(const std::string& path);

// Metrics summary as deterministic JSON text (final relative errors,
// convergence ticks, excluded-entry counts).
std::string metricsToJson(const Metrics& m);
void writeMetricsJson(const std::string& path, const Metrics& m);

}  // namespace shapeest
