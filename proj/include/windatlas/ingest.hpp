#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "windatlas/timestamp.hpp"

namespace windatlas {

/**
 * @brief Identity and location of one weather station.
 */
struct StationMeta {
  std::string station_id;
  std::string name;
  double latitude{};   ///< degrees, WGS84
  double longitude{};  ///< degrees, WGS84
};

/// Parses a `station_id,name,latitude,longitude` catalog. Rejects
/// out-of-range coordinates and duplicate ids.
std::vector<StationMeta> parse_station_catalog(std::string_view csv);

std::string serialize_station_catalog(std::span<const StationMeta> stations);

enum class InputFormat { canonical, fmi };

/**
 * @brief Column roles for the two supported observation layouts.
 *
 * The canonical layout has one ISO-8601 timestamp column. The FMI export
 * splits the instant into year/month/day/time columns and carries no station
 * id, so the caller supplies it (usually the file stem).
 */
struct ColumnMapping {
  InputFormat format{InputFormat::canonical};

  // canonical
  std::string station_id{"station_id"};
  std::string timestamp{"timestamp_iso8601"};

  // fmi
  std::string year{"Year"};
  std::string month{"m"};
  std::string day{"d"};
  std::string time{"Time"};
  std::string time_zone{"Time zone"};

  std::string speed{"wind_speed_ms"};

  static ColumnMapping canonical();
  static ColumnMapping fmi();
};

/**
 * @brief Observations of one station on a gap-free 10-minute grid.
 *
 * Slot i holds the observation at start() + i * 10 min, or std::nullopt when
 * the observation is missing. Negative speeds are stored as missing.
 */
class RawObservationTable {
 public:
  RawObservationTable(std::string station_id, Timestamp start, std::vector<std::optional<double>> speeds,
                      std::string time_zone = {});

  [[nodiscard]] const std::string& station_id() const noexcept { return station_id_; }
  [[nodiscard]] Timestamp start() const noexcept { return start_; }
  [[nodiscard]] Timestamp timestamp(std::size_t slot) const { return start_ + kObservationStep * slot; }
  [[nodiscard]] std::size_t size() const noexcept { return speeds_.size(); }
  [[nodiscard]] bool empty() const noexcept { return speeds_.empty(); }
  [[nodiscard]] std::span<const std::optional<double>> speeds() const noexcept { return speeds_; }
  [[nodiscard]] std::size_t missing_count() const noexcept { return missing_; }
  /// Free-text zone label taken from the source ("UTC", "+02:00", ...); empty if none.
  [[nodiscard]] const std::string& time_zone() const noexcept { return time_zone_; }

 private:
  std::string station_id_;
  Timestamp start_;
  std::vector<std::optional<double>> speeds_;
  std::size_t missing_{0};
  std::string time_zone_;
};

/**
 * @brief Parses one station file and canonicalizes it to the 10-minute grid.
 *
 * Rows may appear in any order. Slots between the first and last timestamp
 * that have no row become missing, as do negative, empty, or non-numeric
 * speeds.
 *
 * Throws SchemaError when a mapped column is absent, ParseError (with the
 * line number) for a row with the wrong field count, a bad timestamp, an
 * off-grid timestamp, or a duplicated timestamp.
 */
RawObservationTable parse_station_csv(std::string_view text, const ColumnMapping& schema,
                                      std::string_view fallback_station_id = {});

/// Canonical CSV (`station_id,timestamp_iso8601,wind_speed_ms`); missing slots
/// are written with an empty speed field.
std::string serialize_station_csv(const RawObservationTable& table);

/// Fraction of missing slots. Throws DataError on an empty table.
double missing_fraction(const RawObservationTable& table);

struct StationPartition {
  std::vector<RawObservationTable> kept;
  std::vector<RawObservationTable> excluded;
};

inline constexpr double kDefaultMissingThreshold = 0.03;

/// Keeps stations whose missing fraction is at most `threshold`. Input order
/// is preserved in both outputs.
StationPartition filter_stations(std::vector<RawObservationTable> tables,
                                 double threshold = kDefaultMissingThreshold);

}  // namespace windatlas
