#include "windatlas/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "csv.hpp"
#include "windatlas/errors.hpp"

namespace windatlas {

using nlohmann::json;

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string fixed(double v, int decimals) { return detail::format_fixed(v, decimals); }

}  // namespace

std::string to_atlas_csv(std::span<const StationAtlasEntry> entries) {
  std::string out = "station_id,name,latitude,longitude,rho,normalized_entropy,battery_wh,load\n";
  for (const auto& e : entries) {
    out += detail::escape_field(e.meta.station_id) + ',' + detail::escape_field(e.meta.name) + ',' +
           detail::format_double(e.meta.latitude) + ',' + detail::format_double(e.meta.longitude) + ',' +
           fixed(e.rho, 4) + ',' + (e.normalized_entropy ? fixed(*e.normalized_entropy, 4) : std::string("NA")) +
           ',' + detail::format_double(e.battery_capacity_wh) + ',' + detail::escape_field(e.load_name) + '\n';
  }
  return out;
}

std::string to_geojson(std::span<const StationAtlasEntry> entries) {
  if (entries.empty()) {
    throw DataError("atlas has no stations");
  }
  json features = json::array();
  for (const auto& e : entries) {
    json props = {
        {"station_id", e.meta.station_id},
        {"name", e.meta.name},
        {"rho", e.rho},
        {"entropy", e.normalized_entropy ? json(*e.normalized_entropy) : json(nullptr)},
        {"battery_wh", e.battery_capacity_wh},
        {"load", e.load_name},
    };
    features.push_back({
        {"type", "Feature"},
        {"geometry", {{"type", "Point"}, {"coordinates", {e.meta.longitude, e.meta.latitude}}}},
        {"properties", std::move(props)},
    });
  }
  const json doc = {{"type", "FeatureCollection"}, {"features", std::move(features)}};
  return doc.dump(2) + "\n";
}

std::vector<StationAtlasEntry> parse_geojson(std::string_view text) {
  std::vector<StationAtlasEntry> entries;
  try {
    const auto doc = json::parse(text);
    if (doc.at("type") != "FeatureCollection") {
      throw DataError("not a FeatureCollection");
    }
    for (const auto& f : doc.at("features")) {
      const auto& coords = f.at("geometry").at("coordinates");
      const auto& p = f.at("properties");
      StationAtlasEntry e;
      e.meta.station_id = p.at("station_id").get<std::string>();
      e.meta.name = p.at("name").get<std::string>();
      e.meta.longitude = coords.at(0).get<double>();
      e.meta.latitude = coords.at(1).get<double>();
      e.rho = p.at("rho").get<double>();
      if (!p.at("entropy").is_null()) {
        e.normalized_entropy = p.at("entropy").get<double>();
      }
      e.battery_capacity_wh = p.at("battery_wh").get<double>();
      e.load_name = p.at("load").get<std::string>();
      entries.push_back(std::move(e));
    }
  } catch (const json::exception& ex) {
    throw DataError(std::string("malformed GeoJSON: ") + ex.what());
  }
  return entries;
}

double marker_radius(double rho, const MapStyle& style) { return style.max_radius * rho; }

SvgMap to_svg_map(std::span<const StationAtlasEntry> entries, const MapStyle& style) {
  if (entries.empty()) {
    throw DataError("atlas has no stations");
  }
  const auto& b = style.bounds;
  if (!(b.max_longitude > b.min_longitude) || !(b.max_latitude > b.min_latitude) || !(style.width > 0.0) ||
      !(style.height > 0.0)) {
    throw DataError("map style needs a non-empty canvas and projection box");
  }

  SvgMap map;
  std::string& svg = map.svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(style.width, 1) + "\" height=\"" +
         fixed(style.height, 1) + "\" viewBox=\"0 0 " + fixed(style.width, 1) + ' ' + fixed(style.height, 1) +
         "\">\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"" + fixed(style.width, 1) + "\" height=\"" + fixed(style.height, 1) +
         "\" fill=\"#f4f6f8\" stroke=\"#999999\"/>\n";
  svg += "  <g fill=\"" + xml_escape(style.fill) + "\" fill-opacity=\"0.7\" stroke=\"#7f0000\" stroke-width=\"0.5\">\n";

  for (const auto& e : entries) {
    double x = (e.meta.longitude - b.min_longitude) / (b.max_longitude - b.min_longitude) * style.width;
    double y = (b.max_latitude - e.meta.latitude) / (b.max_latitude - b.min_latitude) * style.height;
    if (x < 0.0 || x > style.width || y < 0.0 || y > style.height) {
      map.warnings.push_back("station " + e.meta.station_id + " lies outside the map bounds; marker clipped");
      x = std::clamp(x, 0.0, style.width);
      y = std::clamp(y, 0.0, style.height);
    }
    if (e.rho == 0.0 && style.omit_zero) {
      continue;
    }
    svg += "    <circle cx=\"" + fixed(x, 2) + "\" cy=\"" + fixed(y, 2) + "\" r=\"" +
           fixed(marker_radius(e.rho, style), 4) + "\" data-station=\"" + xml_escape(e.meta.station_id) +
           "\"><title>" + xml_escape(e.meta.name) + " rho=" + fixed(e.rho, 4) + "</title></circle>\n";
  }
  svg += "  </g>\n</svg>\n";
  return map;
}

}  // namespace windatlas
