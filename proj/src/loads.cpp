#include "windatlas/loads.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "csv.hpp"
#include "windatlas/errors.hpp"

namespace windatlas {

LoadProfile::LoadProfile(std::string name, int cadence_minutes, std::vector<double> demand_w)
    : name_(std::move(name)), cadence_minutes_(cadence_minutes), demand_w_(std::move(demand_w)) {
  if (cadence_minutes_ <= 0 || 10 % cadence_minutes_ != 0) {
    throw DataError("load cadence must divide 10 minutes, got " + std::to_string(cadence_minutes_));
  }
  for (std::size_t i = 0; i < demand_w_.size(); ++i) {
    if (!std::isfinite(demand_w_[i]) || demand_w_[i] < 0.0) {
      throw DataError("load '" + name_ + "': demand at index " + std::to_string(i) +
                      " is negative or non-finite");
    }
  }
}

double LoadProfile::peak_w() const noexcept {
  return demand_w_.empty() ? 0.0 : *std::max_element(demand_w_.begin(), demand_w_.end());
}

double LoadProfile::energy_wh() const noexcept {
  return std::accumulate(demand_w_.begin(), demand_w_.end(), 0.0) / substeps_per_hour();
}

LoadProfile LoadProfile::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw DataError("scale factor must be positive");
  }
  std::vector<double> out(demand_w_.begin(), demand_w_.end());
  for (auto& d : out) {
    d *= factor;
  }
  return LoadProfile(name_, cadence_minutes_, std::move(out));
}

double demand_at(const LoadProfile& profile, std::int64_t t_prime) {
  const auto demand = profile.demand();
  if (t_prime < 0 || static_cast<std::uint64_t>(t_prime) >= demand.size()) {
    return 0.0;
  }
  return demand[static_cast<std::size_t>(t_prime)];
}

LoadProfile load_profile_from_csv(std::string_view text, std::string name) {
  const auto lines = detail::split_lines(text);
  std::optional<int> cadence;
  std::optional<std::vector<std::string>> header;
  std::size_t index_col = 0, power_col = 0;
  std::vector<double> demand;
  for (const auto& line : lines) {
    if (detail::trim(line.text).starts_with('#')) {
      if (const auto v = detail::comment_value(line.text, "cadence_minutes")) {
        const auto c = detail::parse_int(*v);
        if (!c || *c <= 0 || *c > 10 || 10 % *c != 0) {
          throw ParseError(line.number, "cadence_minutes must divide 10, got '" + *v + "'");
        }
        cadence = static_cast<int>(*c);
      } else if (const auto n = detail::comment_value(line.text, "name")) {
        name = *n;
      }
      continue;
    }
    auto fields = detail::split_fields(line.text);
    if (!header) {
      header = std::move(fields);
      const auto i = detail::column_index(*header, "t_index");
      const auto p = detail::column_index(*header, "power_w");
      if (!i) {
        throw SchemaError("missing column 't_index'");
      }
      if (!p) {
        throw SchemaError("missing column 'power_w'");
      }
      index_col = *i;
      power_col = *p;
      continue;
    }
    if (fields.size() != header->size()) {
      throw ParseError(line.number, "expected " + std::to_string(header->size()) + " fields");
    }
    const auto idx = detail::parse_int(fields[index_col]);
    const auto power = detail::parse_double(fields[power_col]);
    if (!idx || !power) {
      throw ParseError(line.number, "unparseable row");
    }
    if (*idx != static_cast<long long>(demand.size())) {
      throw ParseError(line.number, "t_index " + std::to_string(*idx) + " breaks the contiguous sequence; expected " +
                                        std::to_string(demand.size()));
    }
    if (!std::isfinite(*power) || *power < 0.0) {
      throw ParseError(line.number, "negative or non-finite power");
    }
    demand.push_back(*power);
  }
  if (!cadence) {
    throw SchemaError("missing '# cadence_minutes: N' declaration");
  }
  if (!header) {
    throw SchemaError("no header row");
  }
  if (demand.empty()) {
    throw DataError("load profile has no rows");
  }
  return LoadProfile(std::move(name), *cadence, std::move(demand));
}

std::string serialize_load_profile_csv(const LoadProfile& profile) {
  std::string out = "# cadence_minutes: " + std::to_string(profile.cadence_minutes()) + "\n";
  out += "# name: " + profile.name() + "\n";
  out += "t_index,power_w\n";
  const auto demand = profile.demand();
  for (std::size_t i = 0; i < demand.size(); ++i) {
    out += std::to_string(i) + ',' + detail::format_double(demand[i]) + '\n';
  }
  return out;
}

}  // namespace windatlas
