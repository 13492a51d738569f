// windatlas: wind-power feasibility atlas from 10-minute station observations.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "windatlas/pipeline.hpp"

namespace fs = std::filesystem;
using namespace windatlas;

namespace {

struct Options {
  std::string station_dir;
  std::string stations;
  std::string input_format{"canonical"};
  std::string power_curve{"power_curves/nordex_n100_2500.csv"};
  std::string load{"dishwasher"};
  double battery_wh{1000.0};
  std::vector<double> capacities{200, 500, 800, 1000, 1500, 2000};
  std::string kernel{"fast"};
  std::string out{"windatlas-out"};
  double threshold{kDefaultMissingThreshold};
  std::size_t jobs{std::max(1u, std::thread::hardware_concurrency())};
  bool dump_imputed{false};
  HeightExtrapolation extrapolation;

  // atlas
  std::string results;
  MapStyle style;
};

void add_station_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--station-dir", o.station_dir, "Directory of per-station observation CSV files")
      ->envname("WINDATLAS_STATION_DIR")
      ->required();
  cmd->add_option("--stations", o.stations, "Station catalog CSV (default: <station-dir>/stations.csv)");
  cmd->add_option("--input-format", o.input_format, "Observation layout")
      ->check(CLI::IsMember({"canonical", "fmi"}))
      ->capture_default_str();
  cmd->add_option("--missing-threshold", o.threshold, "Exclude stations with a larger missing fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--jobs,-j", o.jobs, "Stations processed in parallel")->check(CLI::PositiveNumber);
  cmd->add_flag("--dump-imputed", o.dump_imputed, "Write <out>/imputed/<station>.csv (slot,speed,imputed)");
}

void add_model_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--power-curve", o.power_curve, "Power-curve CSV (path or bundled name)")->capture_default_str();
  cmd->add_option("--load", o.load, "Load-profile CSV (path or bundled name: dishwasher, household)")
      ->capture_default_str();
  cmd->add_option("--kernel", o.kernel, "Feasibility scan kernel")
      ->check(CLI::IsMember({"naive", "fast"}))
      ->capture_default_str();
  cmd->add_option("--reference-height", o.extrapolation.reference_height_m, "Measurement height [m]")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--hub-height", o.extrapolation.hub_height_m, "Turbine hub height [m]")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--alpha", o.extrapolation.alpha, "Power-law shear exponent")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

RunConfig make_config(const Options& o, const std::string& command, bool needs_model) {
  RunConfig cfg;
  cfg.command = command;
  cfg.station_dir = o.station_dir;
  cfg.catalog = o.stations;
  cfg.input_format = o.input_format == "fmi" ? InputFormat::fmi : InputFormat::canonical;
  if (needs_model) {
    cfg.power_curve = resolve_data_file(o.power_curve, "power_curves");
    cfg.load = resolve_data_file(o.load, "loads");
  }
  cfg.extrapolation = o.extrapolation;
  cfg.capacities = command == "sweep" ? o.capacities : std::vector<double>{o.battery_wh};
  cfg.kernel = parse_kernel(o.kernel);
  cfg.out_dir = o.out;
  cfg.missing_threshold = o.threshold;
  cfg.jobs = o.jobs;
  cfg.dump_imputed = o.dump_imputed;
  return cfg;
}

void copy_catalog_if_present(const RunConfig& cfg) {
  if (fs::is_regular_file(cfg.catalog_path())) {
    write_catalog(cfg, cfg.out_dir);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wind-power feasibility atlas from 10-minute station observations", "windatlas"};
  app.set_version_flag("--version", std::string("windatlas ") + WINDATLAS_VERSION_STRING);
  app.set_config("--config", "", "TOML/INI file with option defaults; command-line flags take precedence");
  app.require_subcommand(1);

  Options o;

  auto* ingest = app.add_subcommand("ingest", "Parse station files and report missing data");
  add_station_options(ingest, o);
  ingest->add_option("--out", o.out, "Output directory")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Useful annual fraction per station at one battery capacity");
  add_station_options(simulate, o);
  add_model_options(simulate, o);
  simulate->add_option("--battery-wh", o.battery_wh, "Battery capacity [Wh]")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--out", o.out, "Output directory (rho.csv)")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Summary statistics of rho over a list of battery capacities");
  add_station_options(sweep, o);
  add_model_options(sweep, o);
  sweep->add_option("--capacities", o.capacities, "Battery capacities [Wh]")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep->add_option("--out", o.out, "Output directory (sweep.csv)")->capture_default_str();

  auto* analyze = app.add_subcommand("analyze", "Hourly entropy and monthly distributions of suitable starts");
  add_station_options(analyze, o);
  add_model_options(analyze, o);
  analyze->add_option("--battery-wh", o.battery_wh, "Battery capacity [Wh]")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze->add_option("--out", o.out, "Output directory")->capture_default_str();

  auto* atlas = app.add_subcommand("atlas", "Export atlas CSV, GeoJSON and SVG from a results directory");
  atlas->add_option("--results", o.results, "Directory written by `run` or `analyze`")->required();
  atlas->add_option("--out", o.out, "Output prefix; writes PREFIX.csv, PREFIX.geojson, PREFIX.svg")->required();
  atlas->add_option("--max-radius", o.style.max_radius, "Marker radius at rho = 1")->capture_default_str();
  atlas->add_option("--width", o.style.width, "Canvas width")->capture_default_str();
  atlas->add_option("--height", o.style.height, "Canvas height")->capture_default_str();
  atlas->add_flag("--omit-zero", o.style.omit_zero, "Skip markers of stations with rho = 0");

  auto* run = app.add_subcommand("run", "Full pipeline: ingest, filter, impute, power, scan, analysis, atlas");
  add_station_options(run, o);
  add_model_options(run, o);
  run->add_option("--battery-wh", o.battery_wh, "Battery capacity [Wh]")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_option("--out", o.out, "Output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) {
      const auto cfg = make_config(o, "ingest", false);
      auto result = execute(cfg, Stage::ingest);
      fs::create_directories(cfg.out_dir);
      write_ingest_report(result, cfg.out_dir);
      if (cfg.dump_imputed) {
        write_imputed(result, cfg.out_dir);
      }
      write_manifest(cfg, result, cfg.out_dir);
      std::cout << "stations: " << result.ingest.size() << " read, " << result.stations.size() << " kept\n";
    } else if (simulate->parsed() || analyze->parsed()) {
      const bool full = analyze->parsed();
      const auto cfg = make_config(o, full ? "analyze" : "simulate", true);
      auto result = execute(cfg, full ? Stage::analyze : Stage::simulate);
      fs::create_directories(cfg.out_dir);
      write_ingest_report(result, cfg.out_dir);
      write_rho(result, cfg.out_dir);
      if (full) {
        write_analysis(result, cfg.out_dir);
      }
      if (cfg.dump_imputed) {
        write_imputed(result, cfg.out_dir);
      }
      copy_catalog_if_present(cfg);
      write_manifest(cfg, result, cfg.out_dir);
      for (const auto& outcome : result.outcomes) {
        std::cout << outcome.station_id << ',' << outcome.suitability.rho << '\n';
      }
    } else if (sweep->parsed()) {
      const auto cfg = make_config(o, "sweep", true);
      auto result = execute(cfg, Stage::sweep);
      fs::create_directories(cfg.out_dir);
      std::cout << read_file(write_sweep(result, cfg.out_dir));
      write_manifest(cfg, result, cfg.out_dir);
    } else if (atlas->parsed()) {
      const auto entries = read_results(o.results);
      for (const auto& w : write_atlas(entries, o.out, o.style)) {
        std::cerr << "warning: " << w << '\n';
      }
      std::cout << "atlas: " << entries.size() << " stations\n";
    } else if (run->parsed()) {
      return run_pipeline(make_config(o, "run", true), std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
