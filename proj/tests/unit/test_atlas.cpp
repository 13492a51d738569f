#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "windatlas/atlas.hpp"
#include "windatlas/errors.hpp"

using namespace windatlas;

namespace {

StationAtlasEntry entry(std::string id, double lat, double lon, double rho) {
  StationAtlasEntry e;
  e.meta = {std::move(id), "Station", lat, lon};
  e.rho = rho;
  e.normalized_entropy = 0.98;
  e.battery_capacity_wh = 1000.0;
  e.load_name = "dishwasher";
  return e;
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

// Tags open and close in order; good enough for the flat documents we emit.
bool balanced_tags(const std::string& xml) {
  std::vector<std::string> stack;
  const std::regex tag(R"(<(/?)([A-Za-z][\w:-]*)[^>]*?(/?)>)");
  for (auto it = std::sregex_iterator(xml.begin(), xml.end(), tag); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (m[3].length()) continue;
    if (m[1].length()) {
      if (stack.empty() || stack.back() != m[2]) return false;
      stack.pop_back();
    } else {
      stack.push_back(m[2]);
    }
  }
  return stack.empty();
}

}  // namespace

TEST(AtlasCsv, FormatAndNa) {
  std::vector<StationAtlasEntry> es{entry("1", 60.2, 24.9, 0.72345678)};
  es.push_back(entry("2", 61.0, 25.0, 0.0));
  es[1].normalized_entropy.reset();
  es[1].meta.name = "Name, with comma";
  const auto csv = to_atlas_csv(es);
  EXPECT_EQ(csv,
            "station_id,name,latitude,longitude,rho,normalized_entropy,battery_wh,load\n"
            "1,Station,60.2,24.9,0.7235,0.9800,1000,dishwasher\n"
            "2,\"Name, with comma\",61,25,0.0000,NA,1000,dishwasher\n");
}

TEST(GeoJson, SingleFeature) {
  const std::vector<StationAtlasEntry> es{entry("100971", 60.18, 24.94, 0.5)};
  const auto text = to_geojson(es);
  EXPECT_NE(text.find("\"FeatureCollection\""), std::string::npos);
  EXPECT_EQ(count(text, "\"Feature\""), 1u);
  const auto back = parse_geojson(text);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].meta.longitude, 24.94);
  EXPECT_EQ(back[0].meta.latitude, 60.18);
}

TEST(GeoJson, RoundTripIsExact) {
  std::mt19937_64 rng(165);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<StationAtlasEntry> es;
  for (int i = 0; i < 165; ++i) {
    es.push_back(entry(std::to_string(100000 + i), 59.5 + 11 * u(rng), 19 + 13 * u(rng), u(rng)));
  }
  es[3].normalized_entropy.reset();
  const auto back = parse_geojson(to_geojson(es));
  ASSERT_EQ(back.size(), 165u);
  for (std::size_t i = 0; i < es.size(); ++i) {
    EXPECT_EQ(back[i].rho, es[i].rho);
    EXPECT_EQ(back[i].meta.station_id, es[i].meta.station_id);
    EXPECT_EQ(back[i].meta.latitude, es[i].meta.latitude);
    EXPECT_EQ(back[i].normalized_entropy, es[i].normalized_entropy);
    EXPECT_EQ(back[i].battery_capacity_wh, 1000.0);
    EXPECT_EQ(back[i].load_name, "dishwasher");
  }
  EXPECT_THROW(to_geojson(std::vector<StationAtlasEntry>{}), DataError);
  EXPECT_THROW(parse_geojson("{\"type\":\"Feature\"}"), DataError);
  EXPECT_THROW(parse_geojson("not json"), DataError);
}

TEST(SvgMap, RadiusProportionalToRho) {
  const MapStyle style;
  EXPECT_EQ(marker_radius(0.5, style) / marker_radius(1.0, style), 0.5);
  EXPECT_EQ(marker_radius(0.0, style), 0.0);
}

TEST(SvgMap, WellFormedWithOneCirclePerStation) {
  std::vector<StationAtlasEntry> es{entry("1", 60.2, 24.9, 0.7), entry("2", 65.0, 25.5, 0.0),
                                    entry("3", 69.0, 27.0, 1.0)};
  es[0].meta.name = "A & B <x>";
  const auto map = to_svg_map(es);
  EXPECT_TRUE(map.warnings.empty());
  EXPECT_EQ(map.svg.rfind("<?xml", 0), 0u);
  EXPECT_EQ(count(map.svg, "<circle"), 3u);
  EXPECT_EQ(map.svg.find("A & B"), std::string::npos);
  EXPECT_TRUE(balanced_tags(map.svg));

  MapStyle omit;
  omit.omit_zero = true;
  EXPECT_EQ(count(to_svg_map(es, omit).svg, "<circle"), 2u);
}

TEST(SvgMap, OutOfBoundsStationIsClampedWithWarning) {
  const std::vector<StationAtlasEntry> es{entry("1", 60.2, 24.9, 0.7), entry("far", 78.2, 15.6, 0.4)};
  const auto map = to_svg_map(es);
  ASSERT_EQ(map.warnings.size(), 1u);
  EXPECT_NE(map.warnings[0].find("far"), std::string::npos);
  EXPECT_EQ(count(map.svg, "<circle"), 2u);
  EXPECT_THROW(to_svg_map(std::vector<StationAtlasEntry>{}), DataError);
}
