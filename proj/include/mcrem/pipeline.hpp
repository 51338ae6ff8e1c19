#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcrem/estimator.hpp"
#include "mcrem/geometry.hpp"
#include "mcrem/weights.hpp"

namespace mcrem {

enum class Profile { desk, paper };

struct RunConfig {
  std::string example = "ex5_1";
  std::optional<std::string> solution;
  std::optional<std::filesystem::path> measurements;
  /// Overrides of the example's point counts.
  std::optional<std::size_t> m0;
  std::optional<std::size_t> m1;
  std::optional<std::size_t> md;
  /// Row-major d*d conductivity entries; empty means identity.
  std::vector<double> k;
  Profile profile = Profile::desk;
  std::optional<std::uint64_t> n;  // default: the profile's value
  std::optional<double> eps;       // default: the example's value
  std::uint64_t seed = 1;
  std::size_t replicates = 1;
  std::vector<std::size_t> r_list;  // empty means 1..min(15, M_D)
  WeightKind weights = WeightKind::voronoi;
  IdwParams idw;
  double noise = 0.0;
  std::filesystem::path out = "mcrem_out";
  int threads = 0;
  std::uint64_t max_steps = 1'000'000;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Parses "1,2,5-8" into {1,2,5,6,7,8}.
std::vector<std::size_t> parse_r_list(std::string_view text);

/// Applies one key/value setting; keys match the CLI long flag names.
/// Throws ConfigError for unknown keys or malformed values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Reads `key = value` lines; blank lines and lines starting with '#' are ignored.
RunConfig parse_config_file(const std::filesystem::path& path,
                            RunConfig base = {});

struct IngestResult {
  MeasurementSet measurements;
  std::vector<std::string> warnings;
};

/// CSV with header `kind,x1,..,xd,value[,nu]`, kind in {interior, gamma0}.
/// Without a nu column nu_i = 1/sqrt(M_D); with one, nu is renormalized to
/// unit sum of squares (warning if it was off by more than 1e-6). Rows are
/// validated against dom; errors name the 1-based data row.
IngestResult ingest_measurements(const std::filesystem::path& path,
                                 const Domain& dom, double eps);

void write_measurements_csv(const std::filesystem::path& path,
                            const MeasurementSet& meas, int dim);

/// A0.csv and A1.csv (row = pole, header = anchor ids) plus bundle.json.
void write_bundle(const std::filesystem::path& dir, const EstimatorBundle& b,
                  std::string_view suffix = "");
EstimatorBundle read_bundle(const std::filesystem::path& dir,
                            std::string_view suffix = "");

/// Shortest round-trip decimal form.
std::string format_double(double x);

struct RunReport {
  std::vector<std::filesystem::path> files;
  std::vector<double> mu_gamma1_avg;  // per replicate
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;
};

/// Full pipeline: data, MC-REM assembly, spectrum and TSVD family for each
/// replicate (seeds seed, seed+1, ...), then writes the CSV/JSON artifacts.
RunReport run(const RunConfig& cfg);

}  // namespace mcrem
