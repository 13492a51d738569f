#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "windatlas/ingest.hpp"
#include "windatlas/timestamp.hpp"

namespace windatlas {

/**
 * @brief Complete 10 m wind speed series of one station.
 *
 * Every slot holds a finite, non-negative speed. imputed()[i] marks slots that
 * were filled by imputation rather than observed.
 */
class WindSpeedSeries {
 public:
  /// Series with every slot observed.
  WindSpeedSeries(std::string station_id, Timestamp start, std::vector<double> speeds);
  WindSpeedSeries(std::string station_id, Timestamp start, std::vector<double> speeds, std::vector<bool> imputed);

  [[nodiscard]] const std::string& station_id() const noexcept { return station_id_; }
  [[nodiscard]] Timestamp start() const noexcept { return start_; }
  [[nodiscard]] Timestamp timestamp(std::size_t slot) const { return start_ + kObservationStep * slot; }
  [[nodiscard]] std::size_t size() const noexcept { return speeds_.size(); }
  [[nodiscard]] std::span<const double> speeds() const noexcept { return speeds_; }
  [[nodiscard]] const std::vector<bool>& imputed() const noexcept { return imputed_; }
  [[nodiscard]] std::size_t imputed_count() const noexcept;

 private:
  std::string station_id_;
  Timestamp start_;
  std::vector<double> speeds_;
  std::vector<bool> imputed_;
};

/**
 * @brief Fills missing slots by linear interpolation in the slot index.
 *
 * A gap with observations at slots m and n on either side is filled with the
 * line through (m, v_m) and (n, v_n). Gaps touching the start or end of the
 * table repeat the nearest observation. Observed values pass through
 * unchanged. Throws DataError if the table has no observation at all.
 */
WindSpeedSeries impute_linear(const RawObservationTable& table);

/// Debug dump, one row per slot: `slot,speed,imputed`.
std::string dump_imputed_csv(const WindSpeedSeries& series);

}  // namespace windatlas
