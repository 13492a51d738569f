#include "windatlas/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <json.hpp>

#include "csv.hpp"
#include "windatlas/errors.hpp"

namespace windatlas {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Calls fn(i) for i in [0, n) on up to `jobs` threads. Rethrows the error
/// of the lowest failing index, so failures are reported deterministically.
template <class Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

class StageClock {
 public:
  StageClock(std::vector<StageTiming>& out, std::string stage)
      : out_(out), stage_(std::move(stage)), start_(std::chrono::steady_clock::now()) {}
  ~StageClock() {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
    out_.push_back({stage_, dt.count()});
  }
  StageClock(const StageClock&) = delete;
  StageClock& operator=(const StageClock&) = delete;

 private:
  std::vector<StageTiming>& out_;
  std::string stage_;
  std::chrono::steady_clock::time_point start_;
};

std::string input_format_name(InputFormat f) { return f == InputFormat::fmi ? "fmi" : "canonical"; }

template <class T>
T with_stage(const std::string& station, const std::string& stage, const std::function<T()>& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(station, stage, e.what());
  }
}

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& path, const std::vector<std::string>& columns) {
  const auto text = read_file(path);
  const auto lines = detail::split_lines(text);
  if (lines.empty()) {
    throw SchemaError(path.string() + ": empty file");
  }
  const auto header = detail::split_fields(lines.front().text);
  std::vector<std::size_t> idx;
  for (const auto& c : columns) {
    const auto i = detail::column_index(header, c);
    if (!i) {
      throw SchemaError(path.string() + ": missing column '" + c + "'");
    }
    idx.push_back(*i);
  }
  std::vector<std::vector<std::string>> rows;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto fields = detail::split_fields(lines[l].text);
    if (fields.size() != header.size()) {
      throw ParseError(lines[l].number, path.string() + ": wrong field count");
    }
    std::vector<std::string> row;
    for (const auto i : idx) {
      row.push_back(fields[i]);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) {
    throw Error("write failed for " + path.string());
  }
}

std::string sha256_file(const fs::path& path) {
  const auto bytes = read_file(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed for " + path.string());
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

fs::path default_data_dir() {
  if (const char* env = std::getenv("WINDATLAS_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return WINDATLAS_BUNDLED_DATA_DIR;
}

fs::path resolve_data_file(const std::string& name, const std::string& subdir) {
  if (fs::exists(name)) {
    return name;
  }
  const auto data = default_data_dir();
  for (const auto& candidate : {data / name, data / subdir / name, data / subdir / (name + ".csv")}) {
    if (fs::is_regular_file(candidate)) {
      return candidate;
    }
  }
  throw DataError("cannot find '" + name + "' (looked in the working directory and " + (data / subdir).string() +
                  ")");
}

fs::path RunConfig::catalog_path() const { return catalog.empty() ? station_dir / "stations.csv" : catalog; }

void RunConfig::validate(bool needs_catalog) const {
  if (!fs::is_directory(station_dir)) {
    throw DataError("station directory '" + station_dir.string() + "' does not exist");
  }
  if (needs_catalog && !fs::is_regular_file(catalog_path())) {
    throw DataError("station catalog '" + catalog_path().string() + "' does not exist");
  }
  if (!(missing_threshold >= 0.0 && missing_threshold <= 1.0)) {
    throw DataError("missing threshold must lie in [0, 1]");
  }
  if (capacities.empty()) {
    throw DataError("at least one battery capacity is required");
  }
  for (const double c : capacities) {
    if (!std::isfinite(c) || c <= 0.0) {
      throw DataError("battery capacities must be positive");
    }
  }
  if (jobs == 0) {
    throw DataError("--jobs must be at least 1");
  }
  extrapolation.validate();
}

std::vector<fs::path> list_station_files(const fs::path& dir, const fs::path& catalog) {
  std::vector<fs::path> files;
  std::error_code ec;
  const auto catalog_abs = fs::weakly_canonical(catalog, ec);
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") {
      continue;
    }
    if (entry.path().filename() == "stations.csv" || fs::weakly_canonical(entry.path(), ec) == catalog_abs) {
      continue;
    }
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

PipelineResult execute(const RunConfig& cfg, Stage upto) {
  cfg.validate(false);
  PipelineResult result;

  // ingest + filter + impute
  std::vector<std::optional<RawObservationTable>> tables;
  std::vector<fs::path> files;
  {
    StageClock clock(result.timings, "ingest");
    files = list_station_files(cfg.station_dir, cfg.catalog_path());
    if (files.empty()) {
      throw StageError("", "ingest", "no station files in " + cfg.station_dir.string());
    }
    const auto schema = cfg.input_format == InputFormat::fmi ? ColumnMapping::fmi() : ColumnMapping::canonical();
    tables.resize(files.size());
    parallel_for(files.size(), cfg.jobs, [&](std::size_t i) {
      const auto stem = files[i].stem().string();
      try {
        tables[i] = parse_station_csv(read_file(files[i]), schema, stem);
      } catch (const std::exception& e) {
        throw StageError(stem, "ingest", files[i].filename().string() + ": " + e.what());
      }
    });
    std::set<std::string> ids;
    for (std::size_t i = 0; i < tables.size(); ++i) {
      const auto& t = *tables[i];
      if (!ids.insert(t.station_id()).second) {
        throw StageError(t.station_id(), "ingest", "station id appears in more than one file");
      }
    }
  }

  std::vector<std::size_t> kept;
  {
    StageClock clock(result.timings, "filter");
    for (std::size_t i = 0; i < tables.size(); ++i) {
      const auto& t = *tables[i];
      const double frac = missing_fraction(t);
      const bool keep = frac <= cfg.missing_threshold;
      result.ingest.push_back({t.station_id(), files[i], t.size(), t.missing_count(), frac, keep});
      if (keep) {
        kept.push_back(i);
      }
    }
  }

  {
    StageClock clock(result.timings, "impute");
    std::vector<std::optional<WindSpeedSeries>> series(kept.size());
    parallel_for(kept.size(), cfg.jobs, [&](std::size_t k) {
      const auto& t = *tables[kept[k]];
      try {
        series[k] = impute_linear(t);
      } catch (const std::exception& e) {
        throw StageError(t.station_id(), "impute", e.what());
      }
    });
    for (auto& s : series) {
      result.stations.push_back({std::move(*s), std::nullopt});
    }
  }
  tables.clear();
  if (upto == Stage::ingest) {
    return result;
  }

  {
    StageClock clock(result.timings, "power");
    const PowerCurve curve = [&] {
      try {
        return parse_power_curve_csv(read_file(cfg.power_curve));
      } catch (const std::exception& e) {
        throw StageError("", "power", cfg.power_curve.string() + ": " + e.what());
      }
    }();
    parallel_for(result.stations.size(), cfg.jobs, [&](std::size_t i) {
      auto& s = result.stations[i];
      try {
        s.power = speeds_to_power(s.speeds, cfg.extrapolation, curve);
      } catch (const std::exception& e) {
        throw StageError(s.speeds.station_id(), "power", e.what());
      }
    });
  }

  const LoadProfile profile = [&] {
    try {
      return load_profile_from_csv(read_file(cfg.load), cfg.load.stem().string());
    } catch (const std::exception& e) {
      throw StageError("", "load", cfg.load.string() + ": " + e.what());
    }
  }();
  result.load_name = profile.name();

  if (upto == Stage::sweep) {
    StageClock clock(result.timings, "sweep");
    std::vector<double> rhos(result.stations.size());
    for (const double capacity : cfg.capacities) {
      const SimulationConfig sim{capacity, kStartsPerYear};
      parallel_for(result.stations.size(), cfg.jobs, [&](std::size_t i) {
        const auto& s = result.stations[i];
        try {
          rhos[i] = useful_fraction(*s.power, profile, sim, cfg.kernel).rho;
        } catch (const std::exception& e) {
          throw StageError(s.speeds.station_id(), "sweep", e.what());
        }
      });
      if (rhos.empty()) {
        throw StageError("", "sweep", "no station passed the missing-data filter");
      }
      const auto s = summarize(rhos);
      result.sweep.push_back({capacity, s.min, s.max, s.mean, s.std});
    }
    return result;
  }

  {
    StageClock clock(result.timings, "simulate");
    const SimulationConfig sim{cfg.capacities.front(), kStartsPerYear};
    result.outcomes.resize(result.stations.size());
    parallel_for(result.stations.size(), cfg.jobs, [&](std::size_t i) {
      const auto& s = result.stations[i];
      auto& o = result.outcomes[i];
      o.station_id = s.speeds.station_id();
      try {
        o.suitability = useful_fraction(*s.power, profile, sim, cfg.kernel);
      } catch (const std::exception& e) {
        throw StageError(o.station_id, "simulate", e.what());
      }
    });
  }
  if (upto == Stage::simulate) {
    return result;
  }

  {
    StageClock clock(result.timings, "analyze");
    parallel_for(result.stations.size(), cfg.jobs, [&](std::size_t i) {
      const auto& s = result.stations[i];
      auto& o = result.outcomes[i];
      try {
        const StartCalendar calendar(s.speeds.start());
        o.hourly = hourly_entropy(o.suitability.suitable_mask, calendar);
        o.monthly = monthly_distribution(o.suitability.suitable_mask, calendar);
        o.monthly_speed = monthly_mean_speed(s.speeds);
      } catch (const std::exception& e) {
        throw StageError(o.station_id, "analyze", e.what());
      }
    });
  }
  return result;
}

fs::path write_ingest_report(const PipelineResult& r, const fs::path& dir) {
  std::string out = "station_id,source,records,missing,missing_fraction,imputed,status\n";
  std::map<std::string, std::size_t> imputed;
  for (const auto& s : r.stations) {
    imputed[s.speeds.station_id()] = s.speeds.imputed_count();
  }
  for (const auto& rec : r.ingest) {
    const auto it = imputed.find(rec.station_id);
    out += detail::escape_field(rec.station_id) + ',' + detail::escape_field(rec.source.filename().string()) + ',' +
           std::to_string(rec.records) + ',' + std::to_string(rec.missing) + ',' +
           detail::format_fixed(rec.missing_fraction, 6) + ',' +
           (it == imputed.end() ? std::string() : std::to_string(it->second)) + ',' +
           (rec.kept ? "kept" : "excluded") + '\n';
  }
  const auto path = dir / "ingest_report.csv";
  write_file(path, out);
  return path;
}

fs::path write_rho(const PipelineResult& r, const fs::path& dir) {
  std::string out = "station_id,rho\n";
  for (const auto& o : r.outcomes) {
    out += detail::escape_field(o.station_id) + ',' + detail::format_double(o.suitability.rho) + '\n';
  }
  const auto path = dir / "rho.csv";
  write_file(path, out);
  return path;
}

void write_analysis(const PipelineResult& r, const fs::path& dir) {
  std::string hourly = "station_id,hour,count\n";
  std::string monthly = "station_id,month,count\n";
  std::string entropy = "station_id,normalized_entropy\n";
  std::string speed = "station_id,month,mean_speed_ms\n";
  for (std::size_t i = 0; i < r.outcomes.size(); ++i) {
    const auto& o = r.outcomes[i];
    const auto id = detail::escape_field(o.station_id);
    for (std::size_t h = 0; h < 24; ++h) {
      hourly += id + ',' + std::to_string(h) + ',' + std::to_string(o.hourly.hourly_counts[h]) + '\n';
    }
    for (std::size_t m = 0; m < 12; ++m) {
      monthly += id + ',' + std::to_string(m + 1) + ',' + std::to_string(o.monthly[m]) + '\n';
      speed += id + ',' + std::to_string(m + 1) + ',' +
               (std::isnan(o.monthly_speed[m]) ? std::string("NA") : detail::format_fixed(o.monthly_speed[m], 4)) +
               '\n';
    }
    entropy += id + ',' +
               (o.hourly.normalized_entropy ? detail::format_double(*o.hourly.normalized_entropy) : std::string("NA")) +
               '\n';
  }
  write_file(dir / "hourly.csv", hourly);
  write_file(dir / "monthly.csv", monthly);
  write_file(dir / "entropy.csv", entropy);
  write_file(dir / "monthly_speed.csv", speed);
}

fs::path write_sweep(const PipelineResult& r, const fs::path& dir) {
  std::string out = "capacity_wh,min,max,mean,std\n";
  for (const auto& row : r.sweep) {
    out += detail::format_double(row.battery_capacity_wh) + ',' + detail::format_fixed(row.min_rho, 4) + ',' +
           detail::format_fixed(row.max_rho, 4) + ',' + detail::format_fixed(row.mean_rho, 4) + ',' +
           detail::format_fixed(row.std_rho, 4) + '\n';
  }
  const auto path = dir / "sweep.csv";
  write_file(path, out);
  return path;
}

void write_imputed(const PipelineResult& r, const fs::path& dir) {
  for (const auto& s : r.stations) {
    write_file(dir / "imputed" / (s.speeds.station_id() + ".csv"), dump_imputed_csv(s.speeds));
  }
}

fs::path write_catalog(const RunConfig& cfg, const fs::path& dir) {
  const auto stations = parse_station_catalog(read_file(cfg.catalog_path()));
  const auto path = dir / "stations.csv";
  write_file(path, serialize_station_catalog(stations));
  return path;
}

fs::path write_manifest(const RunConfig& cfg, const PipelineResult& r, const fs::path& dir) {
  json inputs = json::array();
  for (const auto& rec : r.ingest) {
    inputs.push_back({{"role", "station"}, {"path", rec.source.string()}, {"sha256", sha256_file(rec.source)}});
  }
  json config = {
      {"station_dir", cfg.station_dir.string()},
      {"input_format", input_format_name(cfg.input_format)},
      {"missing_threshold", cfg.missing_threshold},
      {"battery_wh", cfg.capacities.front()},
      {"capacities_wh", cfg.capacities},
      {"kernel", std::string(kernel_name(cfg.kernel))},
      {"jobs", cfg.jobs},
      {"extrapolation",
       {{"reference_height_m", cfg.extrapolation.reference_height_m},
        {"hub_height_m", cfg.extrapolation.hub_height_m},
        {"alpha", cfg.extrapolation.alpha}}},
  };
  json doc = {{"tool", "windatlas"}, {"version", WINDATLAS_VERSION}, {"command", cfg.command}};
  if (fs::is_regular_file(cfg.catalog_path())) {
    config["catalog"] = cfg.catalog_path().string();
    inputs.push_back(
        {{"role", "catalog"}, {"path", cfg.catalog_path().string()}, {"sha256", sha256_file(cfg.catalog_path())}});
  }
  if (!cfg.power_curve.empty() && fs::is_regular_file(cfg.power_curve)) {
    config["power_curve"] = cfg.power_curve.string();
    doc["power_curve_sha256"] = sha256_file(cfg.power_curve);
    inputs.push_back({{"role", "power_curve"}, {"path", cfg.power_curve.string()}, {"sha256", doc["power_curve_sha256"]}});
  }
  if (!cfg.load.empty() && fs::is_regular_file(cfg.load)) {
    config["load"] = cfg.load.string();
    config["load_name"] = r.load_name;
    inputs.push_back({{"role", "load"}, {"path", cfg.load.string()}, {"sha256", sha256_file(cfg.load)}});
  }
  doc["config"] = std::move(config);
  doc["inputs"] = std::move(inputs);

  std::size_t kept = 0;
  for (const auto& rec : r.ingest) {
    kept += rec.kept ? 1 : 0;
  }
  doc["stations"] = {{"total", r.ingest.size()}, {"kept", kept}, {"excluded", r.ingest.size() - kept}};
  json timings = json::array();
  for (const auto& t : r.timings) {
    timings.push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  }
  doc["timings"] = std::move(timings);

  const auto path = dir / "manifest.json";
  write_file(path, doc.dump(2) + "\n");
  return path;
}

std::vector<StationAtlasEntry> read_results(const fs::path& dir) {
  const auto stage = std::string("atlas");
  const auto manifest = with_stage<json>("", stage, [&] { return json::parse(read_file(dir / "manifest.json")); });
  const double battery_wh = manifest.at("config").value("battery_wh", 0.0);
  const std::string load_name = manifest.at("config").value("load_name", std::string());

  const auto catalog =
      with_stage<std::vector<StationMeta>>("", stage, [&] { return parse_station_catalog(read_file(dir / "stations.csv")); });
  std::map<std::string, StationMeta> meta;
  for (const auto& s : catalog) {
    meta[s.station_id] = s;
  }

  using Rows = std::vector<std::vector<std::string>>;
  const auto rho_rows = with_stage<Rows>("", stage, [&] { return read_csv_rows(dir / "rho.csv", {"station_id", "rho"}); });
  std::map<std::string, std::optional<double>> entropy;
  std::map<std::string, HourlyCounts> hourly;
  std::map<std::string, MonthlyCounts> monthly;
  if (fs::exists(dir / "entropy.csv")) {
    for (const auto& row : with_stage<Rows>("", stage, [&] {
           return read_csv_rows(dir / "entropy.csv", {"station_id", "normalized_entropy"});
         })) {
      entropy[row[0]] = detail::parse_double(row[1]);
    }
  }
  auto read_counts = [&](const fs::path& path, const char* key, std::size_t bins, std::size_t base, auto& target) {
    if (!fs::exists(path)) {
      return;
    }
    for (const auto& row :
         with_stage<Rows>("", stage, [&] { return read_csv_rows(path, {"station_id", key, "count"}); })) {
      const auto bin = detail::parse_int(row[1]);
      const auto count = detail::parse_int(row[2]);
      if (!bin || !count || *bin < static_cast<long long>(base) ||
          *bin >= static_cast<long long>(base + bins) || *count < 0) {
        throw StageError(row[0], stage, path.filename().string() + ": bad row");
      }
      target[row[0]][static_cast<std::size_t>(*bin) - base] = static_cast<std::size_t>(*count);
    }
  };
  read_counts(dir / "hourly.csv", "hour", 24, 0, hourly);
  read_counts(dir / "monthly.csv", "month", 12, 1, monthly);

  std::vector<StationAtlasEntry> entries;
  for (const auto& row : rho_rows) {
    const auto& id = row[0];
    const auto it = meta.find(id);
    if (it == meta.end()) {
      throw StageError(id, stage, "station is missing from the station catalog");
    }
    const auto rho = detail::parse_double(row[1]);
    if (!rho || *rho < 0.0 || *rho > 1.0) {
      throw StageError(id, stage, "rho.csv: rho must lie in [0, 1]");
    }
    StationAtlasEntry e;
    e.meta = it->second;
    e.rho = *rho;
    if (const auto en = entropy.find(id); en != entropy.end()) {
      e.normalized_entropy = en->second;
    }
    if (const auto h = hourly.find(id); h != hourly.end()) {
      e.hourly_counts = h->second;
    }
    if (const auto m = monthly.find(id); m != monthly.end()) {
      e.monthly_counts = m->second;
    }
    e.battery_capacity_wh = battery_wh;
    e.load_name = load_name;
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<std::string> write_atlas(std::span<const StationAtlasEntry> entries, const fs::path& prefix,
                                     const MapStyle& style) {
  if (entries.empty()) {
    throw StageError("", "atlas", "no stations to map");
  }
  auto with_ext = [&](const char* ext) {
    auto p = prefix;
    p += ext;
    return p;
  };
  write_file(with_ext(".csv"), to_atlas_csv(entries));
  write_file(with_ext(".geojson"), to_geojson(entries));
  auto map = to_svg_map(entries, style);
  write_file(with_ext(".svg"), map.svg);
  return map.warnings;
}

int run_pipeline(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    cfg.validate(true);
    auto result = execute(cfg, Stage::analyze);
    const auto& dir = cfg.out_dir;
    fs::create_directories(dir);
    write_ingest_report(result, dir);
    if (cfg.dump_imputed) {
      write_imputed(result, dir);
    }
    write_rho(result, dir);
    write_analysis(result, dir);
    write_catalog(cfg, dir);
    {
      StageClock clock(result.timings, "atlas");
      write_manifest(cfg, result, dir);  // atlas reads battery/load from here
      if (result.outcomes.empty()) {
        throw StageError("", "atlas", "no station passed the missing-data filter");
      }
      for (const auto& w : write_atlas(read_results(dir), dir / "atlas")) {
        err << "warning: " << w << '\n';
      }
    }
    write_manifest(cfg, result, dir);
    std::size_t kept = result.stations.size();
    log << "stations: " << result.ingest.size() << " read, " << kept << " kept, " << result.ingest.size() - kept
        << " excluded\n";
    log << "outputs written to " << dir.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace windatlas
