#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "windatlas/timeseries.hpp"
#include "windatlas/timestamp.hpp"

namespace windatlas {

struct PowerCurveKnot {
  double speed_ms{};
  double power_w{};
};

/**
 * @brief Tabulated turbine power curve with a cut-out speed.
 *
 * Knot speeds are strictly increasing and start at or above 0; powers are
 * non-negative; cut_out_ms is at least the last knot speed.
 */
class PowerCurve {
 public:
  PowerCurve(std::vector<PowerCurveKnot> knots, double cut_out_ms);

  [[nodiscard]] std::span<const PowerCurveKnot> knots() const noexcept { return knots_; }
  [[nodiscard]] double cut_out_ms() const noexcept { return cut_out_ms_; }
  [[nodiscard]] double rated_power_w() const noexcept { return rated_power_w_; }

 private:
  std::vector<PowerCurveKnot> knots_;
  double cut_out_ms_;
  double rated_power_w_{0.0};
};

/**
 * Power-curve file:
 *
 *     # cut_out_ms: 20
 *     speed_ms,power_w
 *     3.0,22
 *     ...
 *
 * Comment lines start with `#`. Without a `cut_out_ms` declaration the last
 * knot speed is used.
 */
PowerCurve parse_power_curve_csv(std::string_view text);

/// Power-law shear profile v_hub = v_ref * (hub / ref)^alpha.
struct HeightExtrapolation {
  double reference_height_m{10.0};
  double hub_height_m{100.0};
  double alpha{1.0 / 7.0};

  /// Throws DataError unless heights and alpha are positive and finite.
  void validate() const;
  [[nodiscard]] double factor() const;
};

/// Throws DataError for a negative or non-finite speed.
double extrapolate_speed(double v10, const HeightExtrapolation& cfg);

/**
 * @brief Turbine output at hub-height speed `v100`.
 *
 * 0 W below the first knot and at or above cut-out; the knot power at a knot;
 * linear between neighbouring knots; the last knot's power between the last
 * knot and cut-out.
 */
double power_at_speed(double v100, const PowerCurve& curve);

class WindPowerSeries {
 public:
  WindPowerSeries(std::string station_id, Timestamp start, std::vector<double> power_w);

  [[nodiscard]] const std::string& station_id() const noexcept { return station_id_; }
  [[nodiscard]] Timestamp start() const noexcept { return start_; }
  [[nodiscard]] std::size_t size() const noexcept { return power_w_.size(); }
  [[nodiscard]] std::span<const double> power_w() const noexcept { return power_w_; }

  /// Same series with every value multiplied by `factor` (> 0).
  [[nodiscard]] WindPowerSeries scaled(double factor) const;

 private:
  std::string station_id_;
  Timestamp start_;
  std::vector<double> power_w_;
};

WindPowerSeries speeds_to_power(const WindSpeedSeries& series, const HeightExtrapolation& cfg,
                                const PowerCurve& curve);

}  // namespace windatlas
