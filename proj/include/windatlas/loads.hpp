#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace windatlas {

/**
 * @brief Demand of an appliance or household over a finite window.
 *
 * demand()[k] is the power drawn during substep k, k in [0, support_length()).
 * The cadence divides the 10-minute observation step, so each observation
 * interval spans substeps_per_observation() substeps.
 */
class LoadProfile {
 public:
  LoadProfile(std::string name, int cadence_minutes, std::vector<double> demand_w);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] int cadence_minutes() const noexcept { return cadence_minutes_; }
  [[nodiscard]] std::span<const double> demand() const noexcept { return demand_w_; }
  [[nodiscard]] std::size_t support_length() const noexcept { return demand_w_.size(); }
  [[nodiscard]] int substeps_per_observation() const noexcept { return 10 / cadence_minutes_; }
  [[nodiscard]] int substeps_per_hour() const noexcept { return 60 / cadence_minutes_; }
  [[nodiscard]] double peak_w() const noexcept;
  /// Total energy of the profile.
  [[nodiscard]] double energy_wh() const noexcept;

  /// Same profile with every demand value multiplied by `factor` (> 0).
  [[nodiscard]] LoadProfile scaled(double factor) const;

 private:
  std::string name_;
  int cadence_minutes_;
  std::vector<double> demand_w_;
};

/// demand()[t_prime] inside the support, 0 W everywhere else.
double demand_at(const LoadProfile& profile, std::int64_t t_prime);

/**
 * Load-profile file:
 *
 *     # cadence_minutes: 1
 *     # name: dishwasher        (optional)
 *     t_index,power_w
 *     0,12.5
 *     ...
 *
 * t_index must run 0, 1, 2, ... without gaps. `name` is used when the file
 * does not declare one.
 */
LoadProfile load_profile_from_csv(std::string_view text, std::string name = "load");

std::string serialize_load_profile_csv(const LoadProfile& profile);

}  // namespace windatlas
