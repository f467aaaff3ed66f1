#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "oedflow/analysis.hpp"
#include "oedflow/cli/config.hpp"

namespace oedflow {

/// Decimal text with 17 significant digits, enough to read back the same double.
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // throws Error if absent
};

/// Reads a numeric CSV with one header line. Throws Error on malformed input.
CsvTable read_csv(const std::filesystem::path& path);

/// iter, particle_index, theta_1..theta_p
void write_particles_csv(const std::filesystem::path& path, const std::vector<Snapshot>& snapshots);
std::vector<Snapshot> read_particles_csv(const std::filesystem::path& path);

/// iter, objective, residual_max, residual_rms
void write_objective_csv(const std::filesystem::path& path, const FlowTrace& trace);

/// theta_1..theta_p, magnitude, v_1..v_p
void write_field_csv(const std::filesystem::path& path, const FieldGrid& field);

/// L, objective, stderr, uniform_ref
void write_landscape_csv(const std::filesystem::path& path, const LandscapeCurve& curve);

/// dt, discrepancy, ratio (ratio to the next smaller dt; empty for the last)
void write_dt_study_csv(const std::filesystem::path& path, const DtStudy& study);

/// N, mean_w2, w2_seed_0..w2_seed_{k-1}
void write_n_study_csv(const std::filesystem::path& path, const NStudy& study,
                       const std::vector<std::uint64_t>& seeds);

/// theta_1..theta_p, weight for candidates with positive weight
void write_weights_csv(const std::filesystem::path& path, const Eigen::MatrixXd& points,
                       const Eigen::VectorXd& weights);

/// iter, objective
void write_series_csv(const std::filesystem::path& path, const std::vector<double>& series);

using ManifestEntries = std::vector<std::pair<std::string, std::string>>;

/// Config as `key = value` lines (usable with --config) followed by the
/// build information and `results` as comment lines.
void write_manifest(const std::filesystem::path& path, const RunConfig& config,
                    const ManifestEntries& results);

}  // namespace oedflow
