#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <vector>

#include "oedflow/criteria.hpp"

namespace oedflow {

struct FlowConfig {
  Criterion criterion = Criterion::AOptimal;
  int n_particles = 1;
  double dt = 1e-3;
  int n_iters = 0;
  std::uint64_t seed = 0;
  int snapshot_every = 1;
  /// Abort when one step moves a particle further than this fraction of
  /// the axis extent on any axis.
  double max_step_fraction = 0.1;

  /// Throws ConfigError when dt <= 0, counts are negative, or
  /// snapshot_every is outside [1, max(1, n_iters)].
  void validate() const;
};

struct Snapshot {
  int iteration = 0;
  ParticleEnsemble ensemble;
};

struct FlowTrace {
  std::vector<double> objective;   // one entry per completed iteration, plus the start
  std::vector<Residual> residual;  // aligned with objective
  std::vector<Snapshot> snapshots;
};

struct FlowFailure {
  int iteration = 0;  // ensemble index whose evaluation, or whose step to it, failed
  std::exception_ptr error;
};

struct FlowResult {
  FlowTrace trace;
  ParticleEnsemble final_ensemble;
  std::optional<FlowFailure> failure;

  bool ok() const { return !failure.has_value(); }
  /// Rethrows the recorded failure, if any.
  void throw_if_failed() const;
};

/// Quantities shared by a step and its diagnostics: one factorization of M
/// for the current ensemble, and every particle's velocity.
struct FlowState {
  double objective = 0.0;
  Residual residual;
  Eigen::MatrixXd velocities;  // N x p
};

FlowState evaluate_flow_state(Criterion c, const ExperimentModel& model,
                              const ParticleEnsemble& ensemble);

/// One forward-Euler step: theta <- project(theta - s * dt * v(theta)) with
/// s = +1 for A (descent) and -1 for D (ascent).
ParticleEnsemble flow_step(Criterion c, const ExperimentModel& model,
                           const ParticleEnsemble& ensemble, double dt,
                           double max_step_fraction = 0.1);

/// Runs T steps, recording objective and residual every
/// iteration, snapshots every `snapshot_every` iterations plus the first and
/// last. A failing step stops the loop; the trace up to it is kept.
FlowResult run_flow(const FlowConfig& config, const ExperimentModel& model,
                    const ParticleEnsemble& initial);

}  // namespace oedflow
