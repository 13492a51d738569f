#include "windatlas/power.hpp"

#include <algorithm>
#include <cmath>

#include "csv.hpp"
#include "windatlas/errors.hpp"

namespace windatlas {

PowerCurve::PowerCurve(std::vector<PowerCurveKnot> knots, double cut_out_ms)
    : knots_(std::move(knots)), cut_out_ms_(cut_out_ms) {
  if (knots_.empty()) {
    throw DataError("power curve has no knots");
  }
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    const auto& k = knots_[i];
    if (!std::isfinite(k.speed_ms) || !std::isfinite(k.power_w) || k.power_w < 0.0) {
      throw DataError("power curve knot " + std::to_string(i) + " has a negative or non-finite value");
    }
    if (i == 0 ? k.speed_ms < 0.0 : k.speed_ms <= knots_[i - 1].speed_ms) {
      throw DataError("power curve knot speeds must be non-negative and strictly increasing");
    }
    rated_power_w_ = std::max(rated_power_w_, k.power_w);
  }
  if (!std::isfinite(cut_out_ms_) || cut_out_ms_ < knots_.back().speed_ms) {
    throw DataError("cut-out speed must be at least the last knot speed");
  }
}

PowerCurve parse_power_curve_csv(std::string_view text) {
  const auto lines = detail::split_lines(text);
  std::optional<double> cut_out;
  std::optional<std::vector<std::string>> header;
  std::size_t speed_col = 0, power_col = 0;
  std::vector<PowerCurveKnot> knots;
  for (const auto& line : lines) {
    if (detail::trim(line.text).starts_with('#')) {
      if (const auto v = detail::comment_value(line.text, "cut_out_ms")) {
        cut_out = detail::parse_double(*v);
        if (!cut_out) {
          throw ParseError(line.number, "unparseable cut_out_ms '" + *v + "'");
        }
      }
      continue;
    }
    auto fields = detail::split_fields(line.text);
    if (!header) {
      header = std::move(fields);
      const auto s = detail::column_index(*header, "speed_ms");
      const auto p = detail::column_index(*header, "power_w");
      if (!s) {
        throw SchemaError("missing column 'speed_ms'");
      }
      if (!p) {
        throw SchemaError("missing column 'power_w'");
      }
      speed_col = *s;
      power_col = *p;
      continue;
    }
    if (fields.size() != header->size()) {
      throw ParseError(line.number, "expected " + std::to_string(header->size()) + " fields");
    }
    const auto speed = detail::parse_double(fields[speed_col]);
    const auto power = detail::parse_double(fields[power_col]);
    if (!speed || !power) {
      throw ParseError(line.number, "unparseable knot");
    }
    knots.push_back({*speed, *power});
  }
  if (!header) {
    throw SchemaError("no header row");
  }
  if (knots.empty()) {
    throw DataError("power curve has no knots");
  }
  return PowerCurve(std::move(knots), cut_out.value_or(knots.back().speed_ms));
}

void HeightExtrapolation::validate() const {
  const bool ok = std::isfinite(reference_height_m) && reference_height_m > 0.0 && std::isfinite(hub_height_m) &&
                  hub_height_m > 0.0 && std::isfinite(alpha) && alpha > 0.0;
  if (!ok) {
    throw DataError("heights and shear exponent must be positive and finite");
  }
}

double HeightExtrapolation::factor() const { return std::pow(hub_height_m / reference_height_m, alpha); }

double extrapolate_speed(double v10, const HeightExtrapolation& cfg) {
  if (!std::isfinite(v10) || v10 < 0.0) {
    throw DataError("cannot extrapolate a negative or non-finite wind speed");
  }
  cfg.validate();
  return v10 * cfg.factor();
}

double power_at_speed(double v100, const PowerCurve& curve) {
  const auto knots = curve.knots();
  if (!(v100 >= knots.front().speed_ms) || v100 >= curve.cut_out_ms()) {
    return 0.0;
  }
  if (v100 >= knots.back().speed_ms) {
    return knots.back().power_w;
  }
  // First knot with speed > v100; v100 lies in [j.speed, next.speed).
  const auto next = std::upper_bound(knots.begin(), knots.end(), v100,
                                     [](double v, const PowerCurveKnot& k) { return v < k.speed_ms; });
  const auto& hi = *next;
  const auto& lo = *(next - 1);
  if (v100 == lo.speed_ms) {
    return lo.power_w;
  }
  const double p = (lo.power_w - hi.power_w) / (lo.speed_ms - hi.speed_ms) * (v100 - lo.speed_ms) + lo.power_w;
  return std::clamp(p, std::min(lo.power_w, hi.power_w), std::max(lo.power_w, hi.power_w));
}

WindPowerSeries::WindPowerSeries(std::string station_id, Timestamp start, std::vector<double> power_w)
    : station_id_(std::move(station_id)), start_(start), power_w_(std::move(power_w)) {
  for (const double p : power_w_) {
    if (!std::isfinite(p) || p < 0.0) {
      throw DataError("wind power must be finite and non-negative (station '" + station_id_ + "')");
    }
  }
}

WindPowerSeries WindPowerSeries::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw DataError("scale factor must be positive");
  }
  std::vector<double> out(power_w_.begin(), power_w_.end());
  for (auto& p : out) {
    p *= factor;
  }
  return WindPowerSeries(station_id_, start_, std::move(out));
}

WindPowerSeries speeds_to_power(const WindSpeedSeries& series, const HeightExtrapolation& cfg,
                                const PowerCurve& curve) {
  cfg.validate();
  const double factor = cfg.factor();
  const auto speeds = series.speeds();
  std::vector<double> power(speeds.size());
  std::transform(speeds.begin(), speeds.end(), power.begin(),
                 [&](double v10) { return power_at_speed(v10 * factor, curve); });
  return WindPowerSeries(series.station_id(), series.start(), std::move(power));
}

}  // namespace windatlas
