#pragma once

#include <cstdint>
#include <numbers>
#include <string>

#include "oedflow/cli/config.hpp"
#include "oedflow/core.hpp"

namespace oedflow {

/// Half-width of the diagonal stripe |theta1 - theta2| <= pi/10.
inline constexpr double kDiagonalHalfWidth = std::numbers::pi / 10.0;

/// Uniform on [0, 2pi)^2.
ParticleEnsemble sample_entire(const DesignDomain& domain, int n, std::uint64_t seed);
/// Uniform on ([0, pi/2] x [0, 2pi)) u ([0, 2pi) x [0, pi/2]).
ParticleEnsemble sample_lshape(const DesignDomain& domain, int n, std::uint64_t seed);
/// theta1 uniform, theta2 = theta1 + U[-w, w], wrapped.
ParticleEnsemble sample_diagonal(const DesignDomain& domain, int n, std::uint64_t seed,
                                 double half_width = kDiagonalHalfWidth);

/// Initial ensemble of config.N particles for the configured init scheme.
/// entire/lshape/diagonal need the angle torus; fedorov needs criterion D
/// and samples the Fedorov weights on the preset candidate grid; file
/// loads the last snapshot of a particles CSV. Throws InvalidInit.
ParticleEnsemble init_ensemble(const RunConfig& config, const ExperimentModel& model,
                               int grid_per_axis);

}  // namespace oedflow
