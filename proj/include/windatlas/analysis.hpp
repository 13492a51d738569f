#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "windatlas/timeseries.hpp"
#include "windatlas/timestamp.hpp"

namespace windatlas {

using HourlyCounts = std::array<std::size_t, 24>;
using MonthlyCounts = std::array<std::size_t, 12>;

/// Maps a start index to its wall-clock instant.
class StartCalendar {
 public:
  explicit StartCalendar(Timestamp first_start, std::chrono::minutes step = kObservationStep)
      : first_(first_start), step_(step) {}

  [[nodiscard]] Timestamp at(std::size_t index) const { return first_ + step_ * index; }
  [[nodiscard]] int hour_of(std::size_t index) const { return hour_of_day(at(index)); }
  [[nodiscard]] int month_of(std::size_t index) const { return month_of_year(at(index)); }

 private:
  Timestamp first_;
  std::chrono::minutes step_;
};

/// Shannon entropy (natural log) of the distribution given by `counts`;
/// empty bins contribute 0. std::nullopt when every count is zero.
std::optional<double> shannon_entropy(std::span<const std::size_t> counts);

struct HourlyEntropy {
  HourlyCounts hourly_counts{};
  /// Entropy divided by log 24, in [0, 1]. std::nullopt when no start is suitable.
  std::optional<double> normalized_entropy;
};

HourlyEntropy hourly_entropy(const std::vector<bool>& mask, const StartCalendar& calendar);

/// Suitable starts per calendar month (index 0 is January).
MonthlyCounts monthly_distribution(const std::vector<bool>& mask, const StartCalendar& calendar);

/// Mean 10 m speed per calendar month; NaN for a month without samples.
std::array<double, 12> monthly_mean_speed(const WindSpeedSeries& series);

struct Summary {
  double min{};
  double max{};
  double mean{};
  double std{};  ///< population standard deviation
};

/// Throws DataError on an empty input.
Summary summarize(std::span<const double> values);

}  // namespace windatlas
