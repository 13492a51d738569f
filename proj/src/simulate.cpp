#include "windatlas/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "windatlas/analysis.hpp"
#include "windatlas/errors.hpp"

namespace windatlas {

// Energies are tracked in watt-substeps (W * dt); dividing by substeps per
// hour converts to Wh. With integral capacities the clamp value is exact.

namespace {

struct Window {
  std::span<const double> wind;    // W per 10-minute slot
  std::span<const double> demand;  // W per substep
  std::size_t per_slot;            // substeps per slot
  double capacity;                 // W * dt
  std::size_t slots_needed;        // slots covered by one window

  Window(const WindPowerSeries& power, const LoadProfile& profile, const SimulationConfig& cfg)
      : wind(power.power_w()),
        demand(profile.demand()),
        per_slot(static_cast<std::size_t>(profile.substeps_per_observation())),
        capacity(cfg.battery_capacity_wh * profile.substeps_per_hour()),
        slots_needed(demand.empty() ? 0 : (demand.size() - 1) / per_slot + 1) {}

  [[nodiscard]] bool fits(std::size_t t_start) const { return t_start + slots_needed <= wind.size(); }

  /// Number of leading starts whose window fits in the data.
  [[nodiscard]] std::size_t fitting_starts() const {
    return wind.size() >= slots_needed ? wind.size() - slots_needed + 1 : 0;
  }
};

bool run_window(const Window& w, std::size_t t_start) {
  if (w.demand.empty()) {
    return true;
  }
  if (!w.fits(t_start)) {
    return false;
  }
  double level = 0.0;
  for (std::size_t k = 0; k < w.demand.size(); ++k) {
    level = std::min(level + (w.wind[t_start + k / w.per_slot] - w.demand[k]), w.capacity);
    if (level < 0.0) {
      return false;
    }
  }
  return true;
}

SuitabilityResult finish(std::vector<bool> mask) {
  SuitabilityResult out;
  out.suitable_count = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
  out.rho = mask.empty() ? 0.0 : static_cast<double>(out.suitable_count) / static_cast<double>(mask.size());
  out.suitable_mask = std::move(mask);
  return out;
}

}  // namespace

void SimulationConfig::validate() const {
  if (!std::isfinite(battery_capacity_wh) || battery_capacity_wh < 0.0) {
    throw DataError("battery capacity must be a finite, non-negative number of Wh");
  }
  if (starts == 0) {
    throw DataError("at least one candidate start is required");
  }
}

bool simulate_start(const WindPowerSeries& power, const LoadProfile& profile, const SimulationConfig& cfg,
                    std::size_t t_start) {
  cfg.validate();
  if (t_start >= cfg.starts) {
    throw std::out_of_range("start slot " + std::to_string(t_start) + " outside [0, " +
                            std::to_string(cfg.starts) + ")");
  }
  return run_window(Window(power, profile, cfg), t_start);
}

BatteryTrace battery_trace(const WindPowerSeries& power, const LoadProfile& profile, const SimulationConfig& cfg,
                           std::size_t t_start) {
  cfg.validate();
  if (t_start >= cfg.starts) {
    throw std::out_of_range("start slot " + std::to_string(t_start) + " outside [0, " +
                            std::to_string(cfg.starts) + ")");
  }
  const Window w(power, profile, cfg);
  const double per_hour = profile.substeps_per_hour();
  BatteryTrace trace;
  trace.level_wh.push_back(0.0);
  if (!w.fits(t_start)) {
    trace.suitable = w.demand.empty();
    return trace;
  }
  double level = 0.0;
  for (std::size_t k = 0; k < w.demand.size(); ++k) {
    level = std::min(level + (w.wind[t_start + k / w.per_slot] - w.demand[k]), w.capacity);
    trace.level_wh.push_back(level / per_hour);
    if (level < 0.0) {
      return trace;
    }
  }
  trace.suitable = true;
  return trace;
}

Kernel parse_kernel(std::string_view name) {
  if (name == "naive") {
    return Kernel::naive;
  }
  if (name == "fast") {
    return Kernel::fast;
  }
  throw DataError("unknown kernel '" + std::string(name) + "' (expected naive or fast)");
}

std::string_view kernel_name(Kernel kernel) { return kernel == Kernel::naive ? "naive" : "fast"; }

SuitabilityResult useful_fraction(const WindPowerSeries& power, const LoadProfile& profile,
                                  const SimulationConfig& cfg) {
  cfg.validate();
  const Window w(power, profile, cfg);
  std::vector<bool> mask(cfg.starts, false);
  for (std::size_t t = 0; t < cfg.starts; ++t) {
    mask[t] = run_window(w, t);
  }
  return finish(std::move(mask));
}

SuitabilityResult useful_fraction_fast(const WindPowerSeries& power, const LoadProfile& profile,
                                       const SimulationConfig& cfg) {
  cfg.validate();
  const Window w(power, profile, cfg);
  std::vector<bool> mask(cfg.starts, false);
  if (w.demand.empty()) {
    mask.assign(cfg.starts, true);
    return finish(std::move(mask));
  }

  // Starts past this bound overrun the data and stay unsuitable.
  const std::size_t scan_end = std::min(cfg.starts, w.fitting_starts());

  // Consecutive starts read consecutive wind slots at every substep, so a
  // block of starts advances in lockstep over contiguous memory. Each lane
  // repeats the reference update exactly; lowest[] records whether the level
  // ever went negative.
  constexpr std::size_t kLanes = 512;
  std::array<double, kLanes> level{};
  std::array<double, kLanes> lowest{};
  const double* wind = w.wind.data();
  const double* demand = w.demand.data();
  const double capacity = w.capacity;
  const std::size_t substeps = w.demand.size();
  const std::size_t per_slot = w.per_slot;

  for (std::size_t block = 0; block < scan_end; block += kLanes) {
    const std::size_t lanes = std::min(kLanes, scan_end - block);
    std::fill_n(level.begin(), lanes, 0.0);
    std::fill_n(lowest.begin(), lanes, 0.0);
    double* lv = level.data();
    double* lo = lowest.data();

    for (std::size_t k = 0; k < substeps; ++k) {
      const double d = demand[k];
      const double* p = wind + block + k / per_slot;
      for (std::size_t b = 0; b < lanes; ++b) {
        const double next = std::min(lv[b] + (p[b] - d), capacity);
        lv[b] = next;
        lo[b] = std::min(lo[b], next);
      }
      // At each slot boundary stop once every lane has failed.
      if ((k + 1) % per_slot == 0) {
        bool any_alive = false;
        for (std::size_t b = 0; b < lanes; ++b) {
          any_alive |= lo[b] >= 0.0;
        }
        if (!any_alive) {
          break;
        }
      }
    }
    for (std::size_t b = 0; b < lanes; ++b) {
      mask[block + b] = lowest[b] >= 0.0;
    }
  }
  return finish(std::move(mask));
}

SuitabilityResult useful_fraction(const WindPowerSeries& power, const LoadProfile& profile,
                                  const SimulationConfig& cfg, Kernel kernel) {
  return kernel == Kernel::naive ? useful_fraction(power, profile, cfg) : useful_fraction_fast(power, profile, cfg);
}

std::vector<SweepRow> capacity_sweep(std::span<const WindPowerSeries> powers, const LoadProfile& profile,
                                     std::span<const double> capacities, Kernel kernel, std::size_t starts) {
  if (capacities.empty()) {
    throw DataError("capacity sweep needs at least one capacity");
  }
  if (powers.empty()) {
    throw DataError("capacity sweep needs at least one station");
  }
  std::vector<SweepRow> rows;
  rows.reserve(capacities.size());
  std::vector<double> rhos(powers.size());
  for (const double capacity : capacities) {
    const SimulationConfig cfg{capacity, starts};
    for (std::size_t i = 0; i < powers.size(); ++i) {
      rhos[i] = useful_fraction(powers[i], profile, cfg, kernel).rho;
    }
    const auto s = summarize(rhos);
    rows.push_back({capacity, s.min, s.max, s.mean, s.std});
  }
  return rows;
}

}  // namespace windatlas
