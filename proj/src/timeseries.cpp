#include "windatlas/timeseries.hpp"

#include <algorithm>
#include <cmath>

#include "csv.hpp"
#include "windatlas/errors.hpp"

namespace windatlas {

WindSpeedSeries::WindSpeedSeries(std::string station_id, Timestamp start, std::vector<double> speeds)
    : WindSpeedSeries(std::move(station_id), start, speeds, std::vector<bool>(speeds.size(), false)) {}

WindSpeedSeries::WindSpeedSeries(std::string station_id, Timestamp start, std::vector<double> speeds,
                                 std::vector<bool> imputed)
    : station_id_(std::move(station_id)), start_(start), speeds_(std::move(speeds)), imputed_(std::move(imputed)) {
  if (speeds_.size() != imputed_.size()) {
    throw DataError("speed and imputed-mask lengths differ");
  }
  for (const double v : speeds_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DataError("wind speeds must be finite and non-negative (station '" + station_id_ + "')");
    }
  }
}

std::size_t WindSpeedSeries::imputed_count() const noexcept {
  return static_cast<std::size_t>(std::count(imputed_.begin(), imputed_.end(), true));
}

WindSpeedSeries impute_linear(const RawObservationTable& table) {
  const auto raw = table.speeds();
  const auto n = raw.size();
  std::vector<double> speeds(n, 0.0);
  std::vector<bool> imputed(n, false);

  std::optional<std::size_t> previous;  // last observed slot
  for (std::size_t i = 0; i < n; ++i) {
    if (!raw[i]) {
      continue;
    }
    speeds[i] = *raw[i];
    if (previous && i - *previous > 1) {
      // Line through (m, v_m) and (n, v_n), evaluated at the slot index.
      const auto m = *previous;
      const double vm = *raw[m];
      const double vn = *raw[i];
      const double slope = (vm - vn) / (static_cast<double>(m) - static_cast<double>(i));
      const double lo = std::min(vm, vn);
      const double hi = std::max(vm, vn);
      for (std::size_t t = m + 1; t < i; ++t) {
        speeds[t] = std::clamp(slope * static_cast<double>(t - m) + vm, lo, hi);
        imputed[t] = true;
      }
    } else if (!previous) {
      // Leading gap: repeat the first observation.
      for (std::size_t t = 0; t < i; ++t) {
        speeds[t] = *raw[i];
        imputed[t] = true;
      }
    }
    previous = i;
  }

  if (!previous) {
    throw DataError("station '" + table.station_id() + "' has no observations to impute from");
  }
  // Trailing gap: repeat the last observation.
  for (std::size_t t = *previous + 1; t < n; ++t) {
    speeds[t] = *raw[*previous];
    imputed[t] = true;
  }
  return WindSpeedSeries(table.station_id(), table.start(), std::move(speeds), std::move(imputed));
}

std::string dump_imputed_csv(const WindSpeedSeries& series) {
  std::string out = "slot,speed,imputed\n";
  const auto speeds = series.speeds();
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += detail::format_double(speeds[i]);
    out += series.imputed()[i] ? ",1\n" : ",0\n";
  }
  return out;
}

}  // namespace windatlas
