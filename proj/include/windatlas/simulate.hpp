#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "windatlas/loads.hpp"
#include "windatlas/power.hpp"
#include "windatlas/timestamp.hpp"

namespace windatlas {

/**
 * @brief Battery and scan parameters for one feasibility run.
 *
 * The substep is the load profile's cadence. `starts` is the number of
 * candidate start slots; it stays at one non-leap year of 10-minute slots for
 * the atlas and is shortened only for synthetic instances.
 */
struct SimulationConfig {
  double battery_capacity_wh{0.0};
  std::size_t starts{kStartsPerYear};

  void validate() const;
};

/**
 * @brief Runs the battery recurrence for one start slot.
 *
 * The battery is empty at the start. At every substep k of the profile the
 * level becomes min(level + (wind - demand[k]) * dt, capacity), where wind is
 * the power of the 10-minute slot containing the substep. The start is
 * suitable iff the level never drops below zero. A window that reaches past
 * the end of `power` is unsuitable.
 *
 * Throws std::out_of_range if t_start >= cfg.starts.
 */
bool simulate_start(const WindPowerSeries& power, const LoadProfile& profile, const SimulationConfig& cfg,
                    std::size_t t_start);

struct BatteryTrace {
  /// Level at the start and after each simulated substep, in Wh. When the
  /// start is unsuitable the trace stops at the first negative level, which
  /// is reported unclamped.
  std::vector<double> level_wh;
  bool suitable{false};
};

BatteryTrace battery_trace(const WindPowerSeries& power, const LoadProfile& profile, const SimulationConfig& cfg,
                           std::size_t t_start);

struct SuitabilityResult {
  std::vector<bool> suitable_mask;  ///< one entry per candidate start
  std::size_t suitable_count{0};
  double rho{0.0};                  ///< suitable_count / starts
};

enum class Kernel { naive, fast };

Kernel parse_kernel(std::string_view name);
std::string_view kernel_name(Kernel kernel);

/// Reference scan: simulate_start at every candidate start.
SuitabilityResult useful_fraction(const WindPowerSeries& power, const LoadProfile& profile,
                                  const SimulationConfig& cfg);

/// Blocked scan over many starts at once. Produces the same mask as
/// useful_fraction, bit for bit: each lane performs the reference arithmetic
/// in the reference order.
SuitabilityResult useful_fraction_fast(const WindPowerSeries& power, const LoadProfile& profile,
                                       const SimulationConfig& cfg);

SuitabilityResult useful_fraction(const WindPowerSeries& power, const LoadProfile& profile,
                                  const SimulationConfig& cfg, Kernel kernel);

struct SweepRow {
  double battery_capacity_wh{};
  double min_rho{};
  double max_rho{};
  double mean_rho{};
  double std_rho{};  ///< population standard deviation over stations
};

/// One row per capacity summarizing rho over all stations. Throws DataError if
/// `capacities` or `powers` is empty.
std::vector<SweepRow> capacity_sweep(std::span<const WindPowerSeries> powers, const LoadProfile& profile,
                                     std::span<const double> capacities, Kernel kernel = Kernel::fast,
                                     std::size_t starts = kStartsPerYear);

}  // namespace windatlas
