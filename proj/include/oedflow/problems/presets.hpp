#pragma once

#include <memory>
#include <string>
#include <vector>

#include "oedflow/core.hpp"

namespace oedflow {

struct ModelOptions {
  int n_boundary = 200;  // EIT boundary nodes
  int n_eval = 20;       // EIT interior evaluation points
  int n_rings = 0;       // EIT mesh rings, 0 = automatic
  double eit_c = 1.0;    // homogeneous EIT conductivity
  int darcy_cells = 100;
  int darcy_params = 20;
};

struct BuiltModel {
  std::shared_ptr<const ExperimentModel> model;
  /// Candidate points per axis for discrete baselines on this model.
  int grid_per_axis = 0;
};

/// Preset names: circle, darcy_bump, eit_homogeneous, eit_inhomogeneous.
/// Throws UnknownPreset for anything else.
BuiltModel build_model(const std::string& preset, const ModelOptions& options = {});

const std::vector<std::string>& preset_names();

}  // namespace oedflow
