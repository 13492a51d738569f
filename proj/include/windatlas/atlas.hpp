#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "windatlas/analysis.hpp"
#include "windatlas/ingest.hpp"

namespace windatlas {

struct StationAtlasEntry {
  StationMeta meta;
  double rho{};
  std::optional<double> normalized_entropy;
  HourlyCounts hourly_counts{};
  MonthlyCounts monthly_counts{};
  double battery_capacity_wh{};
  std::string load_name;
};

/// `station_id,name,latitude,longitude,rho,normalized_entropy,battery_wh,load`;
/// rho and entropy with 4 decimals, undefined entropy as `NA`.
std::string to_atlas_csv(std::span<const StationAtlasEntry> entries);

/// FeatureCollection of Point features ([longitude, latitude]) with properties
/// station_id, name, rho, entropy (null when undefined), battery_wh and load.
/// Numbers are written with round-trip precision. Throws DataError when
/// `entries` is empty.
std::string to_geojson(std::span<const StationAtlasEntry> entries);

/// Reads back the fields written by to_geojson (histograms are not part of it).
std::vector<StationAtlasEntry> parse_geojson(std::string_view text);

struct GeoBounds {
  double min_longitude{};
  double max_longitude{};
  double min_latitude{};
  double max_latitude{};
};

inline constexpr GeoBounds kFinlandBounds{19.0, 32.0, 59.5, 70.5};

struct MapStyle {
  double width{480.0};
  double height{880.0};
  GeoBounds bounds{kFinlandBounds};
  double max_radius{12.0};  ///< radius of a marker with rho = 1
  bool omit_zero{false};    ///< skip rho = 0 markers instead of drawing r="0"
  std::string fill{"#d62728"};
};

/// max_radius * rho
double marker_radius(double rho, const MapStyle& style);

struct SvgMap {
  std::string svg;
  std::vector<std::string> warnings;  ///< one per station clipped to the canvas
};

/// One circle per station on an equirectangular projection of style.bounds.
/// Stations outside the bounds are clamped to the canvas edge and reported in
/// warnings. Throws DataError when `entries` is empty.
SvgMap to_svg_map(std::span<const StationAtlasEntry> entries, const MapStyle& style = {});

}  // namespace windatlas
