#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <numeric>

#include "oedflow/analysis.hpp"
#include "oedflow/baselines.hpp"
#include "oedflow/cli/config.hpp"
#include "oedflow/cli/emit.hpp"
#include "oedflow/cli/init.hpp"
#include "oedflow/problems/presets.hpp"

namespace fs = std::filesystem;
using namespace oedflow;

namespace {

/// A failure inside the flow loop, carrying the iteration for the diagnostic.
struct IterationFailure {
  int iteration;
  std::exception_ptr error;
};

ManifestEntries run_flow_command(const RunConfig& c, const BuiltModel& built, const fs::path& dir) {
  const ExperimentModel& model = *built.model;
  const ParticleEnsemble initial = init_ensemble(c, model, built.grid_per_axis);
  FlowConfig fc;
  fc.criterion = c.criterion;
  fc.n_particles = c.N;
  fc.dt = c.dt;
  fc.n_iters = c.T;
  fc.seed = c.seed;
  fc.snapshot_every = c.snapshot_every > 0 ? c.snapshot_every : std::max(1, c.T);
  fc.max_step_fraction = c.max_step_fraction;
  const FlowResult result = run_flow(fc, model, initial);
  write_particles_csv(dir / "particles.csv", result.trace.snapshots);
  write_objective_csv(dir / "objective.csv", result.trace);
  ManifestEntries out{{"iterations_completed", std::to_string(result.trace.objective.size() - 1)}};
  if (!result.trace.objective.empty()) {
    out.emplace_back("objective_initial", format_double(result.trace.objective.front()));
    out.emplace_back("objective_final", format_double(result.trace.objective.back()));
  }
  if (result.failure) {
    write_manifest(dir / "manifest.ini", c, out);
    throw IterationFailure{result.failure->iteration, result.failure->error};
  }
  return out;
}

ManifestEntries run_landscape(const RunConfig& c, const BuiltModel& built, const fs::path& dir) {
  const LandscapeCurve curve =
      landscape_sweep(c.criterion, *built.model, default_L_grid(c.L_points), c.samples, c.seed, c.seeds);
  write_landscape_csv(dir / "landscape.csv", curve);
  const auto best = c.criterion == Criterion::AOptimal
                        ? std::min_element(curve.objective.begin(), curve.objective.end())
                        : std::max_element(curve.objective.begin(), curve.objective.end());
  return {{"best_L", format_double(curve.L[best - curve.objective.begin()])},
          {"best_objective", format_double(*best)},
          {"uniform_ref", format_double(curve.uniform_ref)}};
}

ManifestEntries run_field(const RunConfig& c, const BuiltModel& built, const fs::path& dir) {
  const ParticleEnsemble background = init_ensemble(c, *built.model, built.grid_per_axis);
  const FieldGrid field = gradient_grid(c.criterion, *built.model, background, c.resolution);
  write_field_csv(dir / "field.csv", field);
  const Eigen::Index best = field.argmax();
  ManifestEntries out{{"max_magnitude", format_double(field.magnitude[best])}};
  for (Eigen::Index k = 0; k < field.points.cols(); ++k) {
    out.emplace_back("argmax_theta_" + std::to_string(k + 1), format_double(field.points(best, k)));
  }
  return out;
}

ManifestEntries run_study_dt(const RunConfig& c, const BuiltModel& built, const fs::path& dir) {
  const ParticleEnsemble initial = init_ensemble(c, *built.model, built.grid_per_axis);
  const DtStudy study =
      dt_convergence_study(c.criterion, *built.model, initial, c.dt_list, c.horizon, c.max_step_fraction);
  write_dt_study_csv(dir / "study_dt.csv", study);
  return {{"dt_ref", format_double(study.dt_ref)}};
}

ManifestEntries run_study_n(const RunConfig& c, const BuiltModel& built, const fs::path& dir) {
  std::vector<std::uint64_t> seeds(c.seeds);
  std::iota(seeds.begin(), seeds.end(), c.seed);
  const NStudy study =
      n_convergence_study(c.criterion, *built.model, c.N_list, c.dt, c.T, seeds, c.max_step_fraction);
  write_n_study_csv(dir / "study_n.csv", study, seeds);
  return {{"N_ref", std::to_string(study.n_ref)},
          {"compared_particles", std::to_string(study.n_compare)},
          {"non_increasing", study.non_increasing ? "true" : "false"}};
}

ManifestEntries run_fedorov(const RunConfig& c, const BuiltModel& built, const fs::path& dir) {
  const int per_axis = c.grid_per_axis > 0 ? c.grid_per_axis : built.grid_per_axis;
  const Eigen::MatrixXd points = candidate_grid(built.model->domain(), per_axis);
  const Eigen::MatrixXd rows = evaluate_rows(*built.model, ParticleEnsemble(points));
  const FedorovResult fed = fedorov_exchange_D(rows, {c.max_iters, c.tol});
  write_weights_csv(dir / "fedorov_weights.csv", points, fed.weights);
  write_series_csv(dir / "fedorov_objective.csv", fed.objective_series);
  const double uniform = fed.objective_series.front();
  return {{"candidates", std::to_string(points.rows())},
          {"iterations", std::to_string(fed.iterations)},
          {"converged", fed.converged ? "true" : "false"},
          {"max_variance", format_double(fed.max_variance)},
          {"objective_uniform", format_double(uniform)},
          {"objective_fedorov", format_double(fed.objective_series.back())}};
}

int run(const RunConfig& c) {
  const BuiltModel built = build_model(c.problem, c.model);
  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  ManifestEntries results;
  if (c.command == "flow") results = run_flow_command(c, built, dir);
  else if (c.command == "landscape") results = run_landscape(c, built, dir);
  else if (c.command == "field") results = run_field(c, built, dir);
  else if (c.command == "study-dt") results = run_study_dt(c, built, dir);
  else if (c.command == "study-n") results = run_study_n(c, built, dir);
  else if (c.command == "fedorov") results = run_fedorov(c, built, dir);
  write_manifest(dir / "manifest.ini", c, results);
  return 0;
}

void report(const std::exception& e, int iteration = -1) {
  std::cerr << "oedflow: " << error_kind(e);
  if (iteration >= 0) std::cerr << " at iteration " << iteration;
  std::cerr << ": " << e.what() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig config;
  try {
    const ParseResult parsed = parse_command_line(argc, argv);
    if (parsed.exit_now) return parsed.exit_code;
    config = parsed.config;
  } catch (const std::exception& e) {
    report(e);
    return 1;
  }
  try {
    return run(config);
  } catch (const IterationFailure& f) {
    try {
      std::rethrow_exception(f.error);
    } catch (const std::exception& e) {
      report(e, f.iteration);
    }
    return 2;
  } catch (const ConfigError& e) {
    report(e);
    return 1;
  } catch (const std::exception& e) {
    report(e);
    return 2;
  }
}
