#include "oedflow/cli/emit.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <charconv>
#include <limits>
#include <fstream>
#include <map>
#include <sstream>

namespace oedflow {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void write_header(std::ofstream& out, const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
}

std::vector<std::string> theta_columns(int p, const std::string& prefix) {
  std::vector<std::string> cols;
  for (int k = 1; k <= p; ++k) cols.push_back(prefix + std::to_string(k));
  return cols;
}

double parse_double(const std::string& field, const std::filesystem::path& path, int line) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    std::ostringstream msg;
    msg << path.string() << ":" << line << ": not a number: '" << field << "'";
    throw Error(msg.str());
  }
  return value;
}

}  // namespace

std::string format_double(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  throw Error("csv: no column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(path.string() + ": empty file");
  {
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) table.header.push_back(field);
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      row.push_back(field.empty() ? std::numeric_limits<double>::quiet_NaN()
                                  : parse_double(field, path, line_no));
    }
    if (!line.empty() && line.back() == ',') row.push_back(std::numeric_limits<double>::quiet_NaN());
    if (row.size() != table.header.size()) {
      std::ostringstream msg;
      msg << path.string() << ":" << line_no << ": expected " << table.header.size() << " fields";
      throw Error(msg.str());
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_particles_csv(const std::filesystem::path& path, const std::vector<Snapshot>& snapshots) {
  auto out = open_out(path);
  const int p = snapshots.empty() ? 0 : snapshots.front().ensemble.dim();
  std::vector<std::string> cols{"iter", "particle_index"};
  for (const auto& c : theta_columns(p, "theta_")) cols.push_back(c);
  write_header(out, cols);
  for (const auto& snap : snapshots) {
    const auto& x = snap.ensemble.coords();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      out << snap.iteration << ',' << i;
      for (Eigen::Index k = 0; k < x.cols(); ++k) out << ',' << format_double(x(i, k));
      out << '\n';
    }
  }
}

std::vector<Snapshot> read_particles_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const int iter_col = table.column("iter");
  const int index_col = table.column("particle_index");
  std::vector<int> theta_cols;
  for (int k = 1;; ++k) {
    const std::string name = "theta_" + std::to_string(k);
    if (std::find(table.header.begin(), table.header.end(), name) == table.header.end()) break;
    theta_cols.push_back(table.column(name));
  }
  if (theta_cols.empty()) throw Error(path.string() + ": no theta columns");

  std::map<int, std::vector<std::pair<int, Eigen::VectorXd>>> by_iter;
  for (const auto& row : table.rows) {
    Eigen::VectorXd theta(theta_cols.size());
    for (std::size_t k = 0; k < theta_cols.size(); ++k) theta[k] = row[theta_cols[k]];
    by_iter[static_cast<int>(row[iter_col])].emplace_back(static_cast<int>(row[index_col]), theta);
  }
  std::vector<Snapshot> snapshots;
  for (auto& [iter, particles] : by_iter) {
    Eigen::MatrixXd coords(particles.size(), theta_cols.size());
    std::vector<char> seen(particles.size(), 0);
    for (const auto& [index, theta] : particles) {
      if (index < 0 || index >= static_cast<int>(particles.size()) || seen[index]) {
        throw Error(path.string() + ": bad particle indices at iteration " + std::to_string(iter));
      }
      seen[index] = 1;
      coords.row(index) = theta.transpose();
    }
    snapshots.push_back({iter, ParticleEnsemble(std::move(coords))});
  }
  return snapshots;
}

void write_objective_csv(const std::filesystem::path& path, const FlowTrace& trace) {
  auto out = open_out(path);
  write_header(out, {"iter", "objective", "residual_max", "residual_rms"});
  for (std::size_t i = 0; i < trace.objective.size(); ++i) {
    out << i << ',' << format_double(trace.objective[i]) << ',' << format_double(trace.residual[i].max)
        << ',' << format_double(trace.residual[i].rms) << '\n';
  }
}

void write_field_csv(const std::filesystem::path& path, const FieldGrid& field) {
  auto out = open_out(path);
  const int p = static_cast<int>(field.points.cols());
  std::vector<std::string> cols = theta_columns(p, "theta_");
  cols.push_back("magnitude");
  for (const auto& c : theta_columns(p, "v_")) cols.push_back(c);
  write_header(out, cols);
  for (Eigen::Index r = 0; r < field.points.rows(); ++r) {
    for (int k = 0; k < p; ++k) out << format_double(field.points(r, k)) << ',';
    out << format_double(field.magnitude[r]);
    for (int k = 0; k < p; ++k) out << ',' << format_double(field.direction(r, k));
    out << '\n';
  }
}

void write_landscape_csv(const std::filesystem::path& path, const LandscapeCurve& curve) {
  auto out = open_out(path);
  write_header(out, {"L", "objective", "stderr", "uniform_ref"});
  for (std::size_t i = 0; i < curve.L.size(); ++i) {
    out << format_double(curve.L[i]) << ',' << format_double(curve.objective[i]) << ','
        << format_double(curve.stderr_[i]) << ',' << format_double(curve.uniform_ref) << '\n';
  }
}

void write_dt_study_csv(const std::filesystem::path& path, const DtStudy& study) {
  auto out = open_out(path);
  write_header(out, {"dt", "discrepancy", "ratio"});
  for (std::size_t i = 0; i < study.dt.size(); ++i) {
    out << format_double(study.dt[i]) << ',' << format_double(study.discrepancy[i]) << ',';
    if (i < study.ratio.size()) out << format_double(study.ratio[i]);
    out << '\n';
  }
}

void write_n_study_csv(const std::filesystem::path& path, const NStudy& study,
                       const std::vector<std::uint64_t>& seeds) {
  auto out = open_out(path);
  std::vector<std::string> cols{"N", "mean_w2"};
  for (std::size_t s = 0; s < seeds.size(); ++s) cols.push_back("w2_seed_" + std::to_string(seeds[s]));
  write_header(out, cols);
  for (std::size_t i = 0; i < study.n.size(); ++i) {
    out << study.n[i] << ',' << format_double(study.mean_discrepancy[i]);
    for (double v : study.per_seed[i]) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_weights_csv(const std::filesystem::path& path, const Eigen::MatrixXd& points,
                       const Eigen::VectorXd& weights) {
  auto out = open_out(path);
  std::vector<std::string> cols = theta_columns(static_cast<int>(points.cols()), "theta_");
  cols.push_back("weight");
  write_header(out, cols);
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    if (!(weights[r] > 0.0)) continue;
    for (Eigen::Index k = 0; k < points.cols(); ++k) out << format_double(points(r, k)) << ',';
    out << format_double(weights[r]) << '\n';
  }
}

void write_series_csv(const std::filesystem::path& path, const std::vector<double>& series) {
  auto out = open_out(path);
  write_header(out, {"iter", "objective"});
  for (std::size_t i = 0; i < series.size(); ++i) out << i << ',' << format_double(series[i]) << '\n';
}

void write_manifest(const std::filesystem::path& path, const RunConfig& config,
                    const ManifestEntries& results) {
  auto out = open_out(path);
  out << "; oedflow run manifest. Re-run with: oedflow " << config.command << " --config <this file>\n";
  out << to_config_text(config);
  out << "; build\n";
  out << "; oedflow_version = " << OEDFLOW_VERSION << '\n';
  out << "; eigen_version = " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.'
      << EIGEN_MINOR_VERSION << '\n';
  out << "; compiler = " << __VERSION__ << '\n';
  out << "; results\n";
  for (const auto& [key, value] : results) out << "; " << key << " = " << value << '\n';
}

}  // namespace oedflow
