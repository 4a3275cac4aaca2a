#include "shapeest/csv_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace shapeest {

namespace {

constexpr const char* kDatasetHeader =
    "k,t_true,y_px,y_pz,y_theta,truth_px,truth_pz,truth_theta,u";
constexpr const char* kEstimatesHeader =
    "k,x_hat,w_l,w_a1,w_a2,w_b1,w_b2,Px,Pw_diag_1,Pw_diag_2,Pw_diag_3,"
    "Pw_diag_4,Pw_diag_5,innov_px,innov_pz,innov_theta";

std::vector<std::string> splitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parseCell(const std::string& cell, int row, const char* col) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0' || errno == ERANGE) {
    throw SchemaError("row " + std::to_string(row) + ": bad value '" + cell +
                      "' in column " + col);
  }
  return v;
}

int parseTick(const std::string& cell, int row) {
  const double v = parseCell(cell, row, "k");
  if (v != std::floor(v) || v < 0.0) {
    throw SchemaError("row " + std::to_string(row) + ": bad tick index '" +
                      cell + "'");
  }
  return static_cast<int>(v);
}

std::ofstream openOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  return out;
}

std::ifstream openIn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read file: " + path);
  return in;
}

nlohmann::json finalOrNull(const std::vector<double>& rel) {
  if (rel.empty() || std::isnan(rel.back())) return nullptr;
  return rel.back();
}

}  // namespace

std::string formatG12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void writeDatasetCsv(const std::string& path, const Dataset& ds) {
  std::ofstream out = openOut(path);
  out << kDatasetHeader << '\n';
  for (std::size_t k = 0; k < ds.measurements.size(); ++k) {
    const MeasurementSample& m = ds.measurements[k];
    out << m.k << ',' << formatG12(ds.truthStates[k]) << ','
        << formatG12(m.y.px) << ',' << formatG12(m.y.pz) << ','
        << formatG12(m.y.theta) << ',' << formatG12(ds.truthPoses[k].px)
        << ',' << formatG12(ds.truthPoses[k].pz) << ','
        << formatG12(ds.truthPoses[k].theta) << ',' << formatG12(m.u)
        << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

Dataset readDatasetCsv(const std::string& path) {
  std::ifstream in = openIn(path);
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty dataset file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kDatasetHeader) {
    throw SchemaError("dataset header mismatch, expected '" +
                      std::string(kDatasetHeader) + "'");
  }
  Dataset ds;
  ds.truthParamsValid = false;
  int row = 0;
  int prevK = -1;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    const auto cells = splitCsvLine(line);
    if (cells.size() != 9) {
      throw SchemaError("row " + std::to_string(row) + ": expected 9 columns, got " +
                        std::to_string(cells.size()));
    }
    MeasurementSample m;
    m.k = parseTick(cells[0], row);
    if (m.k <= prevK) {
      throw SchemaError("row " + std::to_string(row) +
                        ": tick index not strictly increasing");
    }
    prevK = m.k;
    ds.truthStates.push_back(parseCell(cells[1], row, "t_true"));
    m.y.px = parseCell(cells[2], row, "y_px");
    m.y.pz = parseCell(cells[3], row, "y_pz");
    m.y.theta = parseCell(cells[4], row, "y_theta");
    PlanarPose truth;
    truth.px = parseCell(cells[5], row, "truth_px");
    truth.pz = parseCell(cells[6], row, "truth_pz");
    truth.theta = parseCell(cells[7], row, "truth_theta");
    m.u = parseCell(cells[8], row, "u");
    ds.truthPoses.push_back(truth);
    ds.measurements.push_back(m);
  }
  if (ds.measurements.empty()) throw SchemaError("dataset has no rows");
  return ds;
}

void writeEstimatesCsv(const std::string& path,
                       const std::vector<DualEstimate>& estimates) {
  std::ofstream out = openOut(path);
  out << kEstimatesHeader << '\n';
  for (const DualEstimate& e : estimates) {
    out << e.k << ',' << formatG12(e.x());
    for (int i = 0; i < 5; ++i) out << ',' << formatG12(e.params.mean[i]);
    out << ',' << formatG12(e.state.cov(0, 0));
    for (int i = 0; i < 5; ++i) out << ',' << formatG12(e.params.cov(i, i));
    for (int i = 0; i < 3; ++i) out << ',' << formatG12(e.innovState[i]);
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<DualEstimate> readEstimatesCsv(const std::string& path) {
  std::ifstream in = openIn(path);
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty estimates file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kEstimatesHeader) {
    throw SchemaError("estimates header mismatch, expected '" +
                      std::string(kEstimatesHeader) + "'");
  }
  std::vector<DualEstimate> out;
  int row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    const auto cells = splitCsvLine(line);
    if (cells.size() != 16) {
      throw SchemaError("row " + std::to_string(row) +
                        ": expected 16 columns, got " +
                        std::to_string(cells.size()));
    }
    DualEstimate e;
    e.k = parseTick(cells[0], row);
    e.state.mean = Eigen::VectorXd::Constant(1, parseCell(cells[1], row, "x_hat"));
    e.params.mean = Eigen::VectorXd(5);
    for (int i = 0; i < 5; ++i) {
      e.params.mean[i] = parseCell(cells[2 + i], row, "w");
    }
    e.state.cov = Eigen::MatrixXd::Constant(1, 1, parseCell(cells[7], row, "Px"));
    e.params.cov = Eigen::MatrixXd::Zero(5, 5);
    for (int i = 0; i < 5; ++i) {
      e.params.cov(i, i) = parseCell(cells[8 + i], row, "Pw_diag");
    }
    for (int i = 0; i < 3; ++i) {
      e.innovState[i] = parseCell(cells[13 + i], row, "innov");
    }
    out.push_back(e);
  }
  if (out.empty()) throw SchemaError("estimates file has no rows");
  return out;
}

std::string metricsToJson(const Metrics& m) {
  nlohmann::json j;
  j["threshold"] = m.threshold;
  j["ticks"] = m.relT.size();

  nlohmann::json fin, conv, excl;
  fin["t"] = finalOrNull(m.relT);
  conv["t"] = m.convergenceT;
  excl["t"] = m.excludedT;
  const char* wNames[5] = {"w_l", "w_a1", "w_a2", "w_b1", "w_b2"};
  for (int i = 0; i < 5; ++i) {
    fin[wNames[i]] = m.hasParams ? finalOrNull(m.relW[i]) : nlohmann::json();
    conv[wNames[i]] = m.hasParams ? nlohmann::json(m.convergenceW[i])
                                  : nlohmann::json();
    excl[wNames[i]] = m.hasParams ? nlohmann::json(m.excludedW[i])
                                  : nlohmann::json();
  }
  const char* poseNames[3] = {"px", "pz", "theta"};
  for (int i = 0; i < 3; ++i) {
    fin[poseNames[i]] = finalOrNull(m.relPose[i]);
    conv[poseNames[i]] = m.convergencePose[i];
    excl[poseNames[i]] = m.excludedPose[i];
  }
  j["final_rel_err"] = fin;
  j["convergence_tick"] = conv;
  j["excluded_zero_truth"] = excl;
  return j.dump(2) + "\n";
}

void writeMetricsJson(const std::string& path, const Metrics& m) {
  std::ofstream out = openOut(path);
  out << metricsToJson(m);
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace shapeest
