#include "windatlas/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "csv.hpp"
#include "windatlas/errors.hpp"

namespace windatlas {

using detail::column_index;
using detail::parse_double;
using detail::parse_int;
using detail::split_fields;
using detail::split_lines;

namespace {

/// First non-comment line is the header; returns its position in `lines`.
std::size_t header_position(const std::vector<detail::CsvLine>& lines) {
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!detail::trim(lines[i].text).starts_with('#')) {
      return i;
    }
  }
  throw SchemaError("no header row");
}

std::size_t require_column(const std::vector<std::string>& header, const std::string& name) {
  if (const auto idx = column_index(header, name)) {
    return *idx;
  }
  throw SchemaError("missing column '" + name + "'");
}

std::string zone_suffix(std::string_view ts) {
  ts = detail::trim(ts);
  if (ts.ends_with('Z')) {
    return "Z";
  }
  if (ts.size() > 19) {
    const auto tail = ts.substr(ts.size() - 6);
    if ((tail[0] == '+' || tail[0] == '-') && tail[3] == ':') {
      return std::string(tail);
    }
  }
  return {};
}

struct ParsedRow {
  Timestamp time;
  std::optional<double> speed;
  std::size_t line;
};

}  // namespace

ColumnMapping ColumnMapping::canonical() { return ColumnMapping{}; }

ColumnMapping ColumnMapping::fmi() {
  ColumnMapping m;
  m.format = InputFormat::fmi;
  m.speed = "Wind speed (m/s)";
  return m;
}

RawObservationTable::RawObservationTable(std::string station_id, Timestamp start,
                                         std::vector<std::optional<double>> speeds, std::string time_zone)
    : station_id_(std::move(station_id)), start_(start), speeds_(std::move(speeds)), time_zone_(std::move(time_zone)) {
  for (auto& s : speeds_) {
    if (s && (!std::isfinite(*s) || *s < 0.0)) {
      s.reset();
    }
    if (!s) {
      ++missing_;
    }
  }
}

std::vector<StationMeta> parse_station_catalog(std::string_view csv) {
  const auto lines = split_lines(csv);
  const auto head = header_position(lines);
  const auto header = split_fields(lines[head].text);
  const auto id_col = require_column(header, "station_id");
  const auto name_col = require_column(header, "name");
  const auto lat_col = require_column(header, "latitude");
  const auto lon_col = require_column(header, "longitude");

  std::vector<StationMeta> stations;
  std::set<std::string> seen;
  for (std::size_t i = head + 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (detail::trim(line.text).starts_with('#')) {
      continue;
    }
    const auto fields = split_fields(line.text);
    if (fields.size() != header.size()) {
      throw ParseError(line.number, "expected " + std::to_string(header.size()) + " fields, got " +
                                        std::to_string(fields.size()));
    }
    const auto lat = parse_double(fields[lat_col]);
    const auto lon = parse_double(fields[lon_col]);
    if (!lat || !lon) {
      throw ParseError(line.number, "unparseable coordinates");
    }
    if (*lat < -90.0 || *lat > 90.0 || *lon < -180.0 || *lon > 180.0) {
      throw ParseError(line.number, "coordinates out of range");
    }
    if (fields[id_col].empty()) {
      throw ParseError(line.number, "empty station_id");
    }
    if (!seen.insert(fields[id_col]).second) {
      throw ParseError(line.number, "duplicate station_id '" + fields[id_col] + "'");
    }
    stations.push_back({fields[id_col], fields[name_col], *lat, *lon});
  }
  return stations;
}

std::string serialize_station_catalog(std::span<const StationMeta> stations) {
  std::string out = "station_id,name,latitude,longitude\n";
  for (const auto& s : stations) {
    out += detail::escape_field(s.station_id) + ',' + detail::escape_field(s.name) + ',' +
           detail::format_double(s.latitude) + ',' + detail::format_double(s.longitude) + '\n';
  }
  return out;
}

RawObservationTable parse_station_csv(std::string_view text, const ColumnMapping& schema,
                                      std::string_view fallback_station_id) {
  const auto lines = split_lines(text);
  const auto head = header_position(lines);
  const auto header = split_fields(lines[head].text);
  const bool fmi = schema.format == InputFormat::fmi;

  const auto speed_col = require_column(header, schema.speed);
  std::optional<std::size_t> id_col, ts_col, y_col, m_col, d_col, t_col, z_col;
  if (fmi) {
    y_col = require_column(header, schema.year);
    m_col = require_column(header, schema.month);
    d_col = require_column(header, schema.day);
    t_col = require_column(header, schema.time);
    z_col = column_index(header, schema.time_zone);
  } else {
    ts_col = require_column(header, schema.timestamp);
    id_col = column_index(header, schema.station_id);
    if (!id_col && fallback_station_id.empty()) {
      throw SchemaError("missing column '" + schema.station_id + "'");
    }
  }

  std::string station_id(fallback_station_id);
  std::string time_zone;
  std::vector<ParsedRow> rows;
  rows.reserve(lines.size());
  for (std::size_t i = head + 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (detail::trim(line.text).starts_with('#')) {
      continue;
    }
    const auto fields = split_fields(line.text);
    if (fields.size() != header.size()) {
      throw ParseError(line.number, "expected " + std::to_string(header.size()) + " fields, got " +
                                        std::to_string(fields.size()));
    }

    Timestamp ts;
    try {
      if (fmi) {
        const auto y = parse_int(fields[*y_col]);
        const auto m = parse_int(fields[*m_col]);
        const auto d = parse_int(fields[*d_col]);
        const std::string_view hhmm = fields[*t_col];
        const auto colon = hhmm.find(':');
        if (!y || !m || !d || m < 1 || d < 1 || colon == std::string_view::npos) {
          throw Error("bad date or time fields");
        }
        const auto hh = parse_int(hhmm.substr(0, colon));
        const auto mm = parse_int(hhmm.substr(colon + 1, 2));
        if (!hh || !mm || *hh < 0 || *mm < 0 || (hhmm.size() > colon + 3 && hhmm.substr(colon + 3) != ":00")) {
          throw Error("bad time '" + std::string(hhmm) + "'");
        }
        ts = make_timestamp(static_cast<int>(*y), static_cast<unsigned>(*m), static_cast<unsigned>(*d),
                            static_cast<unsigned>(*hh), static_cast<unsigned>(*mm));
        if (z_col && time_zone.empty()) {
          time_zone = fields[*z_col];
        }
      } else {
        ts = parse_iso_timestamp(fields[*ts_col]);
        if (rows.empty()) {
          time_zone = zone_suffix(fields[*ts_col]);
        }
      }
    } catch (const Error& e) {
      throw ParseError(line.number, e.what());
    }

    if (ts.time_since_epoch().count() % kObservationStep.count() != 0) {
      throw ParseError(line.number, "timestamp " + format_iso_timestamp(ts) + " is not on the 10-minute grid");
    }

    if (id_col) {
      const auto& id = fields[*id_col];
      if (id.empty()) {
        throw ParseError(line.number, "empty station_id");
      }
      if (rows.empty()) {
        station_id = id;
      } else if (id != station_id) {
        throw ParseError(line.number, "station_id '" + id + "' differs from '" + station_id + "'");
      }
    }

    rows.push_back({ts, parse_double(fields[speed_col]), line.number});
  }

  if (rows.empty()) {
    throw ParseError(lines[head].number, "file contains no observations");
  }

  std::stable_sort(rows.begin(), rows.end(), [](const ParsedRow& a, const ParsedRow& b) { return a.time < b.time; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].time == rows[i - 1].time) {
      const auto line = std::max(rows[i].line, rows[i - 1].line);
      throw ParseError(line, "duplicate timestamp " + format_iso_timestamp(rows[i].time));
    }
  }

  const auto start = rows.front().time;
  const auto slots = static_cast<std::size_t>((rows.back().time - start) / kObservationStep) + 1;
  std::vector<std::optional<double>> speeds(slots);
  for (const auto& row : rows) {
    speeds[static_cast<std::size_t>((row.time - start) / kObservationStep)] = row.speed;
  }
  return RawObservationTable(std::move(station_id), start, std::move(speeds), std::move(time_zone));
}

std::string serialize_station_csv(const RawObservationTable& table) {
  std::string out = "station_id,timestamp_iso8601,wind_speed_ms\n";
  const auto id = detail::escape_field(table.station_id());
  const auto speeds = table.speeds();
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    out += id;
    out += ',';
    out += format_iso_timestamp(table.timestamp(i));
    out += ',';
    if (speeds[i]) {
      out += detail::format_double(*speeds[i]);
    }
    out += '\n';
  }
  return out;
}

double missing_fraction(const RawObservationTable& table) {
  if (table.empty()) {
    throw DataError("missing_fraction of an empty table (station '" + table.station_id() + "')");
  }
  return static_cast<double>(table.missing_count()) / static_cast<double>(table.size());
}

StationPartition filter_stations(std::vector<RawObservationTable> tables, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw DataError("missing threshold must lie in [0, 1]");
  }
  StationPartition out;
  for (auto& table : tables) {
    if (!table.empty() && missing_fraction(table) <= threshold) {
      out.kept.push_back(std::move(table));
    } else {
      out.excluded.push_back(std::move(table));
    }
  }
  return out;
}

}  // namespace windatlas
