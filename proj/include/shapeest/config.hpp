#pragma once

#include <string>

#include "shapeest/estimator.hpp"
#include "shapeest/simulator.hpp"
#include "shapeest/types.hpp"

namespace shapeest {

// Everything a CLI run needs, merged from built-in defaults and an optional
// flat key=value config file. Angles in config files are degrees and their
// keys end in _deg; everything else is mm/rad and plain numbers.
struct RunConfig {
  SegmentGeometry geometry;
  QuadratureSpec quadrature;
  ShapeParams w0{60.0, -0.05 / 60.0, -0.01 / 60.0, -0.5 / 60.0,
                 -0.15 / 60.0};
  SimConfig sim;
  EstimatorConfig est;
  double convergenceThreshold = 0.05;

  // Copies the shared sections (geometry, quadrature, nominal parameters)
  // into the sim and estimator configs. Called after parsing.
  void propagate();
};

RunConfig defaultRunConfig();

// Parses a flat key=value file ('#' starts a comment). Unknown keys are
// rejected. Throws ConfigError on an unreadable file and on bad keys or
// values: pointing a run at a bad config is a configuration mistake, while
// IoError is reserved for dataset/output files.
RunConfig loadRunConfig(const std::string& path);

// Applies one key=value override; shared by the file loader.
void applyConfigKey(RunConfig& cfg, const std::string& key,
                    const std::string& value);

}  // namespace shapeest
