#include "windatlas/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "windatlas/errors.hpp"

namespace windatlas {

std::optional<double> shannon_entropy(std::span<const std::size_t> counts) {
  std::size_t total = 0;
  for (const auto c : counts) {
    total += c;
  }
  if (total == 0) {
    return std::nullopt;
  }
  double h = 0.0;
  for (const auto c : counts) {
    if (c == 0) {
      continue;  // 0 log 0 := 0
    }
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return std::max(h, 0.0);
}

HourlyEntropy hourly_entropy(const std::vector<bool>& mask, const StartCalendar& calendar) {
  HourlyEntropy out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) {
      ++out.hourly_counts[static_cast<std::size_t>(calendar.hour_of(i))];
    }
  }
  if (const auto h = shannon_entropy(out.hourly_counts)) {
    out.normalized_entropy = std::clamp(*h / std::log(24.0), 0.0, 1.0);
  }
  return out;
}

MonthlyCounts monthly_distribution(const std::vector<bool>& mask, const StartCalendar& calendar) {
  MonthlyCounts counts{};
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) {
      ++counts[static_cast<std::size_t>(calendar.month_of(i) - 1)];
    }
  }
  return counts;
}

std::array<double, 12> monthly_mean_speed(const WindSpeedSeries& series) {
  std::array<double, 12> sums{};
  std::array<std::size_t, 12> counts{};
  const auto speeds = series.speeds();
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    const auto m = static_cast<std::size_t>(month_of_year(series.timestamp(i)) - 1);
    sums[m] += speeds[i];
    ++counts[m];
  }
  std::array<double, 12> means{};
  for (std::size_t m = 0; m < 12; ++m) {
    means[m] = counts[m] == 0 ? std::numeric_limits<double>::quiet_NaN() : sums[m] / static_cast<double>(counts[m]);
  }
  return means;
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) {
    throw DataError("cannot summarize an empty list");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  double sum = 0.0;
  for (const double v : values) {
    sum += v;
  }
  const double n = static_cast<double>(values.size());
  const double mean = std::clamp(sum / n, *lo, *hi);
  double ss = 0.0;
  for (const double v : values) {
    ss += (v - mean) * (v - mean);
  }
  return {*lo, *hi, mean, std::sqrt(ss / n)};
}

}  // namespace windatlas
