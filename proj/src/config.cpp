#include "shapeest/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace shapeest {

namespace {

double parseDouble(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError("bad numeric value for " + key + ": '" + value + "'");
  }
  return v;
}

int parseInt(const std::string& key, const std::string& value) {
  const double v = parseDouble(key, value);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ConfigError("bad integer value for " + key + ": '" + value + "'");
  }
  return static_cast<int>(v);
}

std::uint64_t parseSeed(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError("bad seed value for " + key + ": '" + value + "'");
  }
  return static_cast<std::uint64_t>(v);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

constexpr double kDegToRad = M_PI / 180.0;

}  // namespace

void RunConfig::propagate() {
  sim.wNominal = w0;
  est.w0 = w0;
  est.geometry = geometry;
  est.quadrature = quadrature;
}

RunConfig defaultRunConfig() {
  RunConfig cfg;
  cfg.propagate();
  return cfg;
}

void applyConfigKey(RunConfig& cfg, const std::string& key,
                    const std::string& value) {
  if (key == "geometry.L_mm") {
    cfg.geometry.L = parseDouble(key, value);
    if (!(cfg.geometry.L > 0.0)) throw ConfigError("geometry.L_mm must be > 0");
  } else if (key == "geometry.theta0_deg") {
    cfg.geometry.theta0 = parseDouble(key, value) * kDegToRad;
  } else if (key == "quadrature.nodes") {
    cfg.quadrature.nodes = parseInt(key, value);
    if (cfg.quadrature.nodes < 8) {
      throw ConfigError("quadrature.nodes must be at least 8");
    }
  } else if (key == "w0.l_mm") {
    cfg.w0.l = parseDouble(key, value);
  } else if (key == "w0.a1") {
    cfg.w0.a1 = parseDouble(key, value);
  } else if (key == "w0.a2") {
    cfg.w0.a2 = parseDouble(key, value);
  } else if (key == "w0.b1") {
    cfg.w0.b1 = parseDouble(key, value);
  } else if (key == "w0.b2") {
    cfg.w0.b2 = parseDouble(key, value);
  } else if (key == "sim.n_samples") {
    cfg.sim.nSamples = parseInt(key, value);
  } else if (key == "sim.offset_fraction") {
    cfg.sim.offsetFraction = parseDouble(key, value);
  } else if (key == "sim.noise_pos_mm") {
    cfg.sim.noisePos = parseDouble(key, value);
  } else if (key == "sim.noise_ang_deg") {
    cfg.sim.noiseAng = parseDouble(key, value) * kDegToRad;
  } else if (key == "sim.seed") {
    cfg.sim.seed = parseSeed(key, value);
  } else if (key == "estimator.x0") {
    cfg.est.x0 = parseDouble(key, value);
  } else if (key == "estimator.Px0") {
    cfg.est.Px0 = parseDouble(key, value);
  } else if (key == "estimator.Pw0_l") {
    cfg.est.Pw0diag[0] = parseDouble(key, value);
  } else if (key == "estimator.Pw0_a1") {
    cfg.est.Pw0diag[1] = parseDouble(key, value);
  } else if (key == "estimator.Pw0_a2") {
    cfg.est.Pw0diag[2] = parseDouble(key, value);
  } else if (key == "estimator.Pw0_b1") {
    cfg.est.Pw0diag[3] = parseDouble(key, value);
  } else if (key == "estimator.Pw0_b2") {
    cfg.est.Pw0diag[4] = parseDouble(key, value);
  } else if (key == "estimator.Qv") {
    cfg.est.Qv = parseDouble(key, value);
  } else if (key == "estimator.Qr_l") {
    cfg.est.QrDiag[0] = parseDouble(key, value);
  } else if (key == "estimator.Qr_a1") {
    cfg.est.QrDiag[1] = parseDouble(key, value);
  } else if (key == "estimator.Qr_a2") {
    cfg.est.QrDiag[2] = parseDouble(key, value);
  } else if (key == "estimator.Qr_b1") {
    cfg.est.QrDiag[3] = parseDouble(key, value);
  } else if (key == "estimator.Qr_b2") {
    cfg.est.QrDiag[4] = parseDouble(key, value);
  } else if (key == "estimator.Rn_px") {
    cfg.est.RnDiag[0] = parseDouble(key, value);
  } else if (key == "estimator.Rn_pz") {
    cfg.est.RnDiag[1] = parseDouble(key, value);
  } else if (key == "estimator.Rn_theta") {
    cfg.est.RnDiag[2] = parseDouble(key, value);
  } else if (key == "estimator.Re_px") {
    cfg.est.ReDiag[0] = parseDouble(key, value);
  } else if (key == "estimator.Re_pz") {
    cfg.est.ReDiag[1] = parseDouble(key, value);
  } else if (key == "estimator.Re_theta") {
    cfg.est.ReDiag[2] = parseDouble(key, value);
  } else if (key == "estimator.u_source") {
    if (value == "dataset") {
      cfg.est.uSource = ProcessInputSource::kDataset;
    } else if (value == "predicted") {
      cfg.est.uSource = ProcessInputSource::kPredicted;
    } else {
      throw ConfigError("estimator.u_source must be dataset or predicted");
    }
  } else if (key == "estimator.param_innovation_state") {
    if (value == "posterior") {
      cfg.est.paramInnovationState = ParamInnovationState::kPosterior;
    } else if (value == "prior") {
      cfg.est.paramInnovationState = ParamInnovationState::kPrior;
    } else if (value == "previous") {
      cfg.est.paramInnovationState = ParamInnovationState::kPrevious;
    } else {
      throw ConfigError(
          "estimator.param_innovation_state must be posterior, prior, or "
          "previous");
    }
  } else if (key == "estimator.dxdw_theta") {
    if (value == "model") {
      cfg.est.dxdwTheta = DxdwThetaSource::kModel;
    } else if (value == "measured") {
      cfg.est.dxdwTheta = DxdwThetaSource::kMeasured;
    } else {
      throw ConfigError("estimator.dxdw_theta must be model or measured");
    }
  } else if (key == "metrics.convergence_threshold") {
    cfg.convergenceThreshold = parseDouble(key, value);
  } else {
    throw ConfigError("unknown config key: " + key);
  }
}

RunConfig loadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  RunConfig cfg = defaultRunConfig();
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineNo) +
                        " is not key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config line " + std::to_string(lineNo) +
                        " is missing a key or value");
    }
    applyConfigKey(cfg, key, value);
  }
  cfg.propagate();
  return cfg;
}

}  // namespace shapeest
