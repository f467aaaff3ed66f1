#include "oedflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oedflow/parallel.hpp"

namespace oedflow {

namespace {

ParticleEnsemble advance(Criterion c, const DesignDomain& domain, const ParticleEnsemble& ensemble,
                         const Eigen::MatrixXd& velocities, double dt, double max_step_fraction) {
  const int n = ensemble.size();
  const int p = ensemble.dim();
  const double s = descent_sign(c);
  Eigen::MatrixXd next(n, p);
  for (int i = 0; i < n; ++i) {
    DesignPoint moved = ensemble[i] - s * dt * velocities.row(i).transpose();
    for (int k = 0; k < p; ++k) {
      const double shift = std::abs(moved[k] - ensemble.coords()(i, k));
      if (std::isfinite(moved[k]) && shift > max_step_fraction * domain.extent(k)) {
        std::ostringstream msg;
        msg << "particle " << i << " moved " << shift << " on axis " << k
            << " in one step (limit " << max_step_fraction * domain.extent(k)
            << "); reduce dt";
        throw ExcessiveStep(msg.str());
      }
    }
    next.row(i) = domain_project(domain, moved).transpose();
  }
  return ParticleEnsemble(std::move(next));
}

}  // namespace

void FlowConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive and finite");
  if (n_particles < 1) throw ConfigError("n_particles must be at least 1");
  if (n_iters < 0) throw ConfigError("n_iters must be non-negative");
  if (snapshot_every < 1 || snapshot_every > std::max(1, n_iters)) {
    throw ConfigError("snapshot_every must lie in [1, max(1, n_iters)]");
  }
  if (!(max_step_fraction > 0.0)) throw ConfigError("max_step_fraction must be positive");
}

void FlowResult::throw_if_failed() const {
  if (failure) std::rethrow_exception(failure->error);
}

FlowState evaluate_flow_state(Criterion c, const ExperimentModel& model,
                              const ParticleEnsemble& ensemble) {
  const Eigen::MatrixXd rows = evaluate_rows(model, ensemble);
  const SpdFactor factor(information_from_rows(rows).m);

  FlowState state;
  state.objective = objective(c, factor);
  state.velocities.resize(ensemble.size(), ensemble.dim());
  parallel_for(ensemble.size(), [&](int i) {
    const auto theta = ensemble[i];
    state.velocities.row(i) =
        velocity(c, factor, rows.row(i).transpose(), model.row_jacobian(theta)).transpose();
  });

  double sq = 0.0;
  for (int i = 0; i < ensemble.size(); ++i) {
    const double speed = state.velocities.row(i).norm();
    state.residual.max = std::max(state.residual.max, speed);
    sq += speed * speed;
  }
  state.residual.rms = std::sqrt(sq / ensemble.size());
  return state;
}

ParticleEnsemble flow_step(Criterion c, const ExperimentModel& model,
                           const ParticleEnsemble& ensemble, double dt, double max_step_fraction) {
  const FlowState state = evaluate_flow_state(c, model, ensemble);
  return advance(c, model.domain(), ensemble, state.velocities, dt, max_step_fraction);
}

FlowResult run_flow(const FlowConfig& config, const ExperimentModel& model,
                    const ParticleEnsemble& initial) {
  config.validate();
  if (initial.size() != config.n_particles) {
    throw ConfigError("initial ensemble size does not match n_particles");
  }
  if (initial.dim() != model.design_dim()) {
    throw ConfigError("initial ensemble dimension does not match the model's design space");
  }

  FlowResult result{FlowTrace{}, initial, std::nullopt};
  FlowTrace& trace = result.trace;
  trace.snapshots.push_back({0, initial});

  ParticleEnsemble current = initial;
  int current_iter = 0;
  for (;; ++current_iter) {
    FlowState state;
    try {
      state = evaluate_flow_state(config.criterion, model, current);
    } catch (const Error&) {
      result.failure = FlowFailure{current_iter, std::current_exception()};
      break;
    }
    trace.objective.push_back(state.objective);
    trace.residual.push_back(state.residual);
    if (current_iter == config.n_iters) break;

    try {
      current = advance(config.criterion, model.domain(), current, state.velocities, config.dt,
                        config.max_step_fraction);
    } catch (const Error&) {
      result.failure = FlowFailure{current_iter + 1, std::current_exception()};
      break;
    }
    const int iter = current_iter + 1;
    if (iter % config.snapshot_every == 0 || iter == config.n_iters) {
      trace.snapshots.push_back({iter, current});
    }
  }
  if (result.failure && trace.snapshots.back().iteration != current_iter) {
    trace.snapshots.push_back({current_iter, current});
  }
  result.final_ensemble = current;
  return result;
}

}  // namespace oedflow
