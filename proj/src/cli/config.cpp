#include "oedflow/cli/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <sstream>

#include "oedflow/cli/emit.hpp"

namespace oedflow {

namespace {

const std::vector<std::string> kCommands{"flow", "landscape", "field", "study-dt", "study-n", "fedorov"};
const std::vector<std::string> kInits{"entire", "lshape", "diagonal", "uniform", "fedorov", "file"};

template <typename T>
std::string join(const std::vector<T>& values) {
  std::ostringstream s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s << ',';
    if constexpr (std::is_floating_point_v<T>) {
      s << format_double(values[i]);
    } else {
      s << values[i];
    }
  }
  return s.str();
}

bool contains(const std::vector<std::string>& list, const std::string& value) {
  return std::find(list.begin(), list.end(), value) != list.end();
}

}  // namespace

void RunConfig::validate() const {
  const auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (!contains(kCommands, command)) fail("unknown command '" + command + "'");
  if (!contains(preset_names(), problem)) fail("unknown problem '" + problem + "'");
  if (!contains(kInits, init)) fail("unknown init '" + init + "'");
  if (init == "fedorov" && criterion != Criterion::DOptimal) fail("init = fedorov requires criterion D");
  if (init == "file" && init_file.empty()) fail("init = file requires init_file");
  if (N < 1) fail("N must be at least 1");
  if (!(dt > 0.0)) fail("dt must be positive");
  if (T < 0) fail("T must be non-negative");
  if (snapshot_every < 0 || snapshot_every > std::max(1, T)) fail("snapshot_every must lie in [0, max(1, T)]");
  if (!(max_step_fraction > 0.0)) fail("max_step_fraction must be positive");
  if (samples < 1 || seeds < 1) fail("samples and seeds must be positive");
  if (L_points < 2) fail("L_points must be at least 2");
  if (resolution < 1) fail("resolution must be positive");
  if (grid_per_axis < 0) fail("grid_per_axis must be non-negative");
  if (max_iters < 0 || !(tol > 0.0)) fail("max_iters must be non-negative and tol positive");
  if (command == "study-dt") {
    if (dt_list.empty()) fail("study-dt needs dt_list");
    if (!(horizon >= 0.0)) fail("horizon must be non-negative");
  }
  if (command == "study-n" && N_list.empty()) fail("study-n needs N_list");
}

ParseResult parse_command_line(int argc, const char* const* argv) {
  ParseResult result;
  RunConfig& c = result.config;
  std::string criterion = "A";

  CLI::App app{"Optimal experimental design by Wasserstein particle gradient flow", "oedflow"};
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "Read options from a key = value file");
  app.set_version_flag("--version", OEDFLOW_VERSION);

  app.add_option("--problem", c.problem, "circle, darcy_bump, eit_homogeneous or eit_inhomogeneous");
  app.add_option("--criterion", criterion, "A or D");
  app.add_option("--init", c.init, "entire, lshape, diagonal, uniform, fedorov or file");
  app.add_option("--init_file", c.init_file, "Particles CSV for init = file (last snapshot is used)");
  app.add_option("--seed", c.seed, "Random seed");
  app.add_option("--N", c.N, "Number of particles");
  app.add_option("--dt", c.dt, "Time step");
  app.add_option("--T", c.T, "Number of flow steps");
  app.add_option("--snapshot_every", c.snapshot_every, "Snapshot interval (0 = first and last only)");
  app.add_option("--max_step_fraction", c.max_step_fraction, "Abort when a step exceeds this fraction of an axis");
  app.add_option("--output_dir", c.output_dir, "Directory for CSV files and the manifest");
  app.add_option("--n_boundary", c.model.n_boundary, "EIT boundary nodes");
  app.add_option("--n_eval", c.model.n_eval, "EIT interior evaluation points");
  app.add_option("--n_rings", c.model.n_rings, "EIT mesh rings (0 = automatic)");
  app.add_option("--eit_c", c.model.eit_c, "Homogeneous EIT conductivity");
  app.add_option("--darcy_cells", c.model.darcy_cells, "Darcy grid cells");
  app.add_option("--darcy_params", c.model.darcy_params, "Darcy conductivity blocks");
  app.add_option("--samples", c.samples, "landscape: particles per rho_L sample");
  app.add_option("--seeds", c.seeds, "landscape, study-n: independent repetitions");
  app.add_option("--L_points", c.L_points, "landscape: points on the L grid over [0, pi]");
  app.add_option("--resolution", c.resolution, "field: grid points per axis");
  app.add_option("--dt_list", c.dt_list, "study-dt: comma-separated time steps")->delimiter(',');
  app.add_option("--horizon", c.horizon, "study-dt: final time");
  app.add_option("--N_list", c.N_list, "study-n: comma-separated particle counts")->delimiter(',');
  app.add_option("--grid_per_axis", c.grid_per_axis, "fedorov: candidates per axis (0 = preset default)");
  app.add_option("--max_iters", c.max_iters, "fedorov: iteration limit");
  app.add_option("--tol", c.tol, "fedorov: equivalence-theorem tolerance");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"flow", "Run the particle gradient flow"},
      {"landscape", "Objective of rho_L over L (EIT presets)"},
      {"field", "Velocity field on a grid for the initial ensemble"},
      {"study-dt", "Time-step convergence study"},
      {"study-n", "Particle-count convergence study"},
      {"fedorov", "Fedorov exchange D-optimal weights on a candidate grid"}};
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->fallthrough()->callback([&c, name = name] { c.command = name; });
  }
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    result.exit_now = true;
    result.exit_code = app.exit(e);
    return result;
  } catch (const CLI::CallForAllHelp& e) {
    result.exit_now = true;
    result.exit_code = app.exit(e);
    return result;
  } catch (const CLI::CallForVersion& e) {
    result.exit_now = true;
    result.exit_code = app.exit(e);
    return result;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  c.criterion = parse_criterion(criterion);
  c.validate();
  return result;
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream s;
  s << "problem = " << c.problem << '\n'
    << "criterion = " << (c.criterion == Criterion::AOptimal ? "A" : "D") << '\n'
    << "init = " << c.init << '\n';
  if (!c.init_file.empty()) s << "init_file = \"" << c.init_file << "\"\n";
  s << "seed = " << c.seed << '\n'
    << "N = " << c.N << '\n'
    << "dt = " << format_double(c.dt) << '\n'
    << "T = " << c.T << '\n'
    << "snapshot_every = " << c.snapshot_every << '\n'
    << "max_step_fraction = " << format_double(c.max_step_fraction) << '\n'
    << "output_dir = \"" << c.output_dir << "\"\n"
    << "n_boundary = " << c.model.n_boundary << '\n'
    << "n_eval = " << c.model.n_eval << '\n'
    << "n_rings = " << c.model.n_rings << '\n'
    << "eit_c = " << format_double(c.model.eit_c) << '\n'
    << "darcy_cells = " << c.model.darcy_cells << '\n'
    << "darcy_params = " << c.model.darcy_params << '\n'
    << "samples = " << c.samples << '\n'
    << "seeds = " << c.seeds << '\n'
    << "L_points = " << c.L_points << '\n'
    << "resolution = " << c.resolution << '\n';
  if (!c.dt_list.empty()) s << "dt_list = \"" << join(c.dt_list) << "\"\n";
  s << "horizon = " << format_double(c.horizon) << '\n';
  if (!c.N_list.empty()) s << "N_list = \"" << join(c.N_list) << "\"\n";
  s << "grid_per_axis = " << c.grid_per_axis << '\n'
    << "max_iters = " << c.max_iters << '\n'
    << "tol = " << format_double(c.tol) << '\n';
  return s.str();
}

std::string error_kind(const std::exception& e) {
#define OEDFLOW_KIND(T) \
  if (dynamic_cast<const T*>(&e)) return #T;
  OEDFLOW_KIND(SingularInformationMatrix)
  OEDFLOW_KIND(NonFiniteCoordinate)
  OEDFLOW_KIND(ExcessiveStep)
  OEDFLOW_KIND(AsymmetricPerturbation)
  OEDFLOW_KIND(NonPositiveMedia)
  OEDFLOW_KIND(MeshError)
  OEDFLOW_KIND(UnknownPreset)
  OEDFLOW_KIND(RankDeficientCandidates)
  OEDFLOW_KIND(InvalidL)
  OEDFLOW_KIND(SizeMismatch)
  OEDFLOW_KIND(InvalidInit)
  OEDFLOW_KIND(ConfigError)
  OEDFLOW_KIND(Error)
#undef OEDFLOW_KIND
  return "InternalError";
}

}  // namespace oedflow
