#include "windatlas/timestamp.hpp"

#include <array>
#include <charconv>
#include <cstdio>

#include "windatlas/errors.hpp"

namespace windatlas {

namespace {

using namespace std::chrono;

bool read_digits(std::string_view s, std::size_t pos, std::size_t count, int& out) {
  if (pos + count > s.size()) {
    return false;
  }
  for (std::size_t i = pos; i < pos + count; ++i) {
    if (s[i] < '0' || s[i] > '9') {
      return false;
    }
  }
  const auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + count, out);
  return ec == std::errc{};
}

[[noreturn]] void bad(std::string_view text, const char* why) {
  throw Error("invalid timestamp '" + std::string(text) + "': " + why);
}

}  // namespace

Timestamp make_timestamp(int year, unsigned month, unsigned day, unsigned hour, unsigned minute) {
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
  if (!ymd.ok()) {
    throw Error("invalid calendar date " + std::to_string(year) + "-" + std::to_string(month) + "-" +
                std::to_string(day));
  }
  if (hour > 23 || minute > 59) {
    throw Error("invalid time of day " + std::to_string(hour) + ":" + std::to_string(minute));
  }
  return Timestamp{sys_days{ymd}} + hours{hour} + minutes{minute};
}

Timestamp parse_iso_timestamp(std::string_view text) {
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  if (!read_digits(text, 0, 4, year) || text.size() < 16 || text[4] != '-' || !read_digits(text, 5, 2, month) ||
      text[7] != '-' || !read_digits(text, 8, 2, day) || (text[10] != 'T' && text[10] != ' ') ||
      !read_digits(text, 11, 2, hour) || text[13] != ':' || !read_digits(text, 14, 2, minute)) {
    bad(text, "expected YYYY-MM-DDTHH:MM");
  }
  std::size_t pos = 16;
  if (pos < text.size() && text[pos] == ':') {
    if (!read_digits(text, pos + 1, 2, second)) {
      bad(text, "bad seconds");
    }
    pos += 3;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        if (text[pos] != '0') {
          bad(text, "sub-minute timestamps are not supported");
        }
        ++pos;
      }
    }
  }
  if (second != 0) {
    bad(text, "sub-minute timestamps are not supported");
  }
  if (pos < text.size()) {
    const auto zone = text.substr(pos);
    int zh = 0, zm = 0;
    const bool utc = zone == "Z";
    const bool offset = zone.size() == 6 && (zone[0] == '+' || zone[0] == '-') && read_digits(zone, 1, 2, zh) &&
                        zone[3] == ':' && read_digits(zone, 4, 2, zm) && zh <= 14 && zm < 60;
    if (!utc && !offset) {
      bad(text, "unrecognized zone suffix");
    }
  }
  try {
    return make_timestamp(year, static_cast<unsigned>(month), static_cast<unsigned>(day),
                          static_cast<unsigned>(hour), static_cast<unsigned>(minute));
  } catch (const Error& e) {
    bad(text, e.what());
  }
}

std::string format_iso_timestamp(Timestamp t) {
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss hms{t - day};
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02uT%02d:%02d:00", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()));
  return buf.data();
}

int hour_of_day(Timestamp t) {
  const auto day = floor<days>(t);
  return static_cast<int>(floor<hours>(t - day).count());
}

int month_of_year(Timestamp t) {
  const year_month_day ymd{floor<days>(t)};
  return static_cast<int>(static_cast<unsigned>(ymd.month()));
}

}  // namespace windatlas
