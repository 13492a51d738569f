#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <string_view>

namespace windatlas {

/// Wall-clock time exactly as written in the source file. No timezone
/// conversion is ever applied; hour-of-day and month analyses use these
/// values directly.
using Timestamp = std::chrono::sys_time<std::chrono::minutes>;

/// Cadence of the station observations.
inline constexpr std::chrono::minutes kObservationStep{10};

/// Candidate start instants in a (non-leap) year of 10-minute slots.
inline constexpr std::size_t kStartsPerYear = 365 * 24 * 6;

/// Accepts `YYYY-MM-DDTHH:MM[:SS][.fff][Z|+hh:mm|-hh:mm]` (a space may replace
/// the `T`). Seconds must be zero. The offset suffix, if any, is validated
/// and then ignored. Throws windatlas::Error on malformed input.
Timestamp parse_iso_timestamp(std::string_view text);

/// `YYYY-MM-DDTHH:MM:SS`, without an offset.
std::string format_iso_timestamp(Timestamp t);

/// Builds a timestamp from calendar parts; throws on an invalid date or time.
Timestamp make_timestamp(int year, unsigned month, unsigned day, unsigned hour, unsigned minute);

/// 0..23
[[nodiscard]] int hour_of_day(Timestamp t);

/// 1..12
[[nodiscard]] int month_of_year(Timestamp t);

}  // namespace windatlas
