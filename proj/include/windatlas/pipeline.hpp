#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "windatlas/analysis.hpp"
#include "windatlas/atlas.hpp"
#include "windatlas/errors.hpp"
#include "windatlas/ingest.hpp"
#include "windatlas/loads.hpp"
#include "windatlas/power.hpp"
#include "windatlas/simulate.hpp"
#include "windatlas/timeseries.hpp"

namespace windatlas {

/// A failure tied to one station and pipeline stage.
class StageError : public Error {
 public:
  StageError(std::string station, std::string stage, const std::string& what)
      : Error("station " + (station.empty() ? std::string("-") : station) + ": stage " + stage + ": " + what),
        station_(std::move(station)),
        stage_(std::move(stage)) {}

  [[nodiscard]] const std::string& station() const noexcept { return station_; }
  [[nodiscard]] const std::string& stage() const noexcept { return stage_; }

 private:
  std::string station_;
  std::string stage_;
};

struct RunConfig {
  std::filesystem::path station_dir;
  std::filesystem::path catalog;  ///< empty: <station_dir>/stations.csv
  InputFormat input_format{InputFormat::canonical};
  std::filesystem::path power_curve;
  HeightExtrapolation extrapolation;
  std::filesystem::path load;
  std::vector<double> capacities{1000.0};  ///< the first is used by single-capacity stages
  Kernel kernel{Kernel::fast};
  std::filesystem::path out_dir{"windatlas-out"};
  double missing_threshold{kDefaultMissingThreshold};
  std::size_t jobs{1};
  bool dump_imputed{false};
  std::string command{"run"};  ///< recorded in the manifest

  /// Throws DataError naming the first invalid field.
  void validate(bool needs_catalog) const;
  [[nodiscard]] std::filesystem::path catalog_path() const;
};

/// Default data directory: $WINDATLAS_DATA_DIR if set, else the bundled data/.
std::filesystem::path default_data_dir();

/// `name` as a path if it exists; otherwise looked up under the data directory
/// (`<data>/<name>`, then `<data>/<subdir>/<name>.csv`).
std::filesystem::path resolve_data_file(const std::string& name, const std::string& subdir);

/// Station files in `dir` (`*.csv`, excluding the catalog), sorted by name.
std::vector<std::filesystem::path> list_station_files(const std::filesystem::path& dir,
                                                      const std::filesystem::path& catalog);

struct IngestRecord {
  std::string station_id;
  std::filesystem::path source;
  std::size_t records{};
  std::size_t missing{};
  double missing_fraction{};
  bool kept{};
};

struct StationRun {
  WindSpeedSeries speeds;
  std::optional<WindPowerSeries> power;  ///< set once the power stage has run
};

struct StationOutcome {
  std::string station_id;
  SuitabilityResult suitability;
  HourlyEntropy hourly;
  MonthlyCounts monthly{};
  std::array<double, 12> monthly_speed{};
};

struct StageTiming {
  std::string stage;
  double seconds{};
};

/// Everything produced by one pipeline invocation, in station-file order.
struct PipelineResult {
  std::vector<IngestRecord> ingest;
  std::vector<StationRun> stations;  ///< kept stations only
  std::vector<StationOutcome> outcomes;
  std::vector<SweepRow> sweep;
  std::vector<StageTiming> timings;
  std::string load_name;
};

enum class Stage { ingest, simulate, analyze, sweep };

/// Runs the stages needed for `upto`. Results do not depend on cfg.jobs.
/// Failures surface as StageError.
PipelineResult execute(const RunConfig& cfg, Stage upto);

// Writers; each returns the path it wrote.
std::filesystem::path write_ingest_report(const PipelineResult& r, const std::filesystem::path& dir);
std::filesystem::path write_rho(const PipelineResult& r, const std::filesystem::path& dir);
void write_analysis(const PipelineResult& r, const std::filesystem::path& dir);
std::filesystem::path write_sweep(const PipelineResult& r, const std::filesystem::path& dir);
void write_imputed(const PipelineResult& r, const std::filesystem::path& dir);
/// Copies the parsed station catalog to <dir>/stations.csv.
std::filesystem::path write_catalog(const RunConfig& cfg, const std::filesystem::path& dir);
std::filesystem::path write_manifest(const RunConfig& cfg, const PipelineResult& r, const std::filesystem::path& dir);

/// Builds atlas entries from a results directory holding rho.csv, entropy.csv,
/// hourly.csv, monthly.csv, stations.csv and manifest.json.
std::vector<StationAtlasEntry> read_results(const std::filesystem::path& results_dir);

/// Writes <prefix>.csv, <prefix>.geojson and <prefix>.svg; returns SVG warnings.
std::vector<std::string> write_atlas(std::span<const StationAtlasEntry> entries, const std::filesystem::path& prefix,
                                     const MapStyle& style = {});

/// Full pipeline into cfg.out_dir. Returns the process exit status; errors
/// are reported on `err`.
int run_pipeline(const RunConfig& cfg, std::ostream& log, std::ostream& err);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace windatlas
