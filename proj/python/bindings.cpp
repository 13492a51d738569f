#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "windatlas/analysis.hpp"
#include "windatlas/atlas.hpp"
#include "windatlas/errors.hpp"
#include "windatlas/ingest.hpp"
#include "windatlas/loads.hpp"
#include "windatlas/power.hpp"
#include "windatlas/simulate.hpp"
#include "windatlas/timeseries.hpp"

namespace py = pybind11;
using namespace windatlas;

namespace {

// Timestamps cross the boundary as ISO-8601 strings without an offset.
std::string iso(Timestamp t) { return format_iso_timestamp(t); }

InputFormat input_format(const std::string& name) {
  if (name == "canonical") {
    return InputFormat::canonical;
  }
  if (name == "fmi") {
    return InputFormat::fmi;
  }
  throw DataError("unknown input format '" + name + "' (expected canonical or fmi)");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Wind-power feasibility atlas from 10-minute station observations.";
  m.attr("__version__") = "0.1.0";
  m.attr("STARTS_PER_YEAR") = kStartsPerYear;

  auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<SchemaError>(m, "SchemaError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());

  // ingest
  py::class_<StationMeta>(m, "StationMeta")
      .def(py::init([](std::string id, std::string name, double lat, double lon) {
             return StationMeta{std::move(id), std::move(name), lat, lon};
           }),
           py::arg("station_id"), py::arg("name"), py::arg("latitude"), py::arg("longitude"))
      .def_readwrite("station_id", &StationMeta::station_id)
      .def_readwrite("name", &StationMeta::name)
      .def_readwrite("latitude", &StationMeta::latitude)
      .def_readwrite("longitude", &StationMeta::longitude);

  m.def("parse_station_catalog", &parse_station_catalog, py::arg("csv"));

  py::class_<RawObservationTable>(m, "RawObservationTable")
      .def(py::init([](std::string id, const std::string& start, std::vector<std::optional<double>> speeds) {
             return RawObservationTable(std::move(id), parse_iso_timestamp(start), std::move(speeds));
           }),
           py::arg("station_id"), py::arg("start"), py::arg("speeds"))
      .def_property_readonly("station_id", &RawObservationTable::station_id)
      .def_property_readonly("start", [](const RawObservationTable& t) { return iso(t.start()); })
      .def_property_readonly("speeds",
                             [](const RawObservationTable& t) {
                               return std::vector<std::optional<double>>(t.speeds().begin(), t.speeds().end());
                             })
      .def_property_readonly("missing_count", &RawObservationTable::missing_count)
      .def("timestamp", [](const RawObservationTable& t, std::size_t i) { return iso(t.timestamp(i)); })
      .def("__len__", &RawObservationTable::size);

  m.def(
      "parse_station_csv",
      [](std::string_view text, const std::string& format, std::string_view station_id) {
        auto mapping = input_format(format) == InputFormat::fmi ? ColumnMapping::fmi() : ColumnMapping::canonical();
        return parse_station_csv(text, mapping, station_id);
      },
      py::arg("text"), py::arg("input_format") = "canonical", py::arg("station_id") = "");
  m.def("serialize_station_csv", &serialize_station_csv, py::arg("table"));
  m.def("missing_fraction", &missing_fraction, py::arg("table"));
  m.def(
      "filter_stations",
      [](std::vector<RawObservationTable> tables, double threshold) {
        auto p = filter_stations(std::move(tables), threshold);
        return py::make_tuple(std::move(p.kept), std::move(p.excluded));
      },
      py::arg("tables"), py::arg("threshold") = kDefaultMissingThreshold);

  // timeseries
  py::class_<WindSpeedSeries>(m, "WindSpeedSeries")
      .def(py::init([](std::string id, const std::string& start, std::vector<double> speeds) {
             return WindSpeedSeries(std::move(id), parse_iso_timestamp(start), std::move(speeds));
           }),
           py::arg("station_id"), py::arg("start"), py::arg("speeds"))
      .def_property_readonly("station_id", &WindSpeedSeries::station_id)
      .def_property_readonly("start", [](const WindSpeedSeries& s) { return iso(s.start()); })
      .def_property_readonly(
          "speeds", [](const WindSpeedSeries& s) { return std::vector<double>(s.speeds().begin(), s.speeds().end()); })
      .def_property_readonly("imputed", &WindSpeedSeries::imputed)
      .def("__len__", &WindSpeedSeries::size);
  m.def("impute_linear", &impute_linear, py::arg("table"));

  // power
  py::class_<PowerCurve>(m, "PowerCurve")
      .def(py::init([](const std::vector<std::pair<double, double>>& knots, double cut_out) {
             std::vector<PowerCurveKnot> k;
             for (const auto& [s, p] : knots) {
               k.push_back({s, p});
             }
             return PowerCurve(std::move(k), cut_out);
           }),
           py::arg("knots"), py::arg("cut_out_ms"))
      .def_property_readonly("knots",
                             [](const PowerCurve& c) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& k : c.knots()) {
                                 out.emplace_back(k.speed_ms, k.power_w);
                               }
                               return out;
                             })
      .def_property_readonly("cut_out_ms", &PowerCurve::cut_out_ms)
      .def_property_readonly("rated_power_w", &PowerCurve::rated_power_w);
  m.def("parse_power_curve_csv", &parse_power_curve_csv, py::arg("text"));

  py::class_<HeightExtrapolation>(m, "HeightExtrapolation")
      .def(py::init([](double ref, double hub, double alpha) { return HeightExtrapolation{ref, hub, alpha}; }),
           py::arg("reference_height_m") = 10.0, py::arg("hub_height_m") = 100.0, py::arg("alpha") = 1.0 / 7.0)
      .def_readwrite("reference_height_m", &HeightExtrapolation::reference_height_m)
      .def_readwrite("hub_height_m", &HeightExtrapolation::hub_height_m)
      .def_readwrite("alpha", &HeightExtrapolation::alpha);

  py::class_<WindPowerSeries>(m, "WindPowerSeries")
      .def(py::init([](std::string id, const std::string& start, std::vector<double> power) {
             return WindPowerSeries(std::move(id), parse_iso_timestamp(start), std::move(power));
           }),
           py::arg("station_id"), py::arg("start"), py::arg("power_w"))
      .def_property_readonly("station_id", &WindPowerSeries::station_id)
      .def_property_readonly("start", [](const WindPowerSeries& s) { return iso(s.start()); })
      .def_property_readonly(
          "power_w", [](const WindPowerSeries& s) { return std::vector<double>(s.power_w().begin(), s.power_w().end()); })
      .def("__len__", &WindPowerSeries::size);

  m.def("extrapolate_speed", &extrapolate_speed, py::arg("v10"), py::arg("cfg") = HeightExtrapolation{});
  m.def("power_at_speed", &power_at_speed, py::arg("v100"), py::arg("curve"));
  m.def("speeds_to_power", &speeds_to_power, py::arg("series"), py::arg("cfg"), py::arg("curve"));

  // loads
  py::class_<LoadProfile>(m, "LoadProfile")
      .def(py::init<std::string, int, std::vector<double>>(), py::arg("name"), py::arg("cadence_minutes"),
           py::arg("demand_w"))
      .def_property_readonly("name", &LoadProfile::name)
      .def_property_readonly("cadence_minutes", &LoadProfile::cadence_minutes)
      .def_property_readonly(
          "demand_w", [](const LoadProfile& p) { return std::vector<double>(p.demand().begin(), p.demand().end()); })
      .def_property_readonly("support_length", &LoadProfile::support_length)
      .def_property_readonly("energy_wh", &LoadProfile::energy_wh);
  m.def("load_profile_from_csv", &load_profile_from_csv, py::arg("text"), py::arg("name") = "load");
  m.def("demand_at", &demand_at, py::arg("profile"), py::arg("t_prime"));

  // simulate
  py::class_<SimulationConfig>(m, "SimulationConfig")
      .def(py::init([](double capacity, std::size_t starts) { return SimulationConfig{capacity, starts}; }),
           py::arg("battery_capacity_wh"), py::arg("starts") = kStartsPerYear)
      .def_readwrite("battery_capacity_wh", &SimulationConfig::battery_capacity_wh)
      .def_readwrite("starts", &SimulationConfig::starts);

  py::class_<SuitabilityResult>(m, "SuitabilityResult")
      .def_readonly("suitable_mask", &SuitabilityResult::suitable_mask)
      .def_readonly("suitable_count", &SuitabilityResult::suitable_count)
      .def_readonly("rho", &SuitabilityResult::rho);

  py::class_<BatteryTrace>(m, "BatteryTrace")
      .def_readonly("level_wh", &BatteryTrace::level_wh)
      .def_readonly("suitable", &BatteryTrace::suitable);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("battery_capacity_wh", &SweepRow::battery_capacity_wh)
      .def_readonly("min_rho", &SweepRow::min_rho)
      .def_readonly("max_rho", &SweepRow::max_rho)
      .def_readonly("mean_rho", &SweepRow::mean_rho)
      .def_readonly("std_rho", &SweepRow::std_rho);

  m.def("simulate_start", &simulate_start, py::arg("power"), py::arg("profile"), py::arg("cfg"), py::arg("t_start"));
  m.def("battery_trace", &battery_trace, py::arg("power"), py::arg("profile"), py::arg("cfg"), py::arg("t_start"));
  m.def(
      "useful_fraction",
      [](const WindPowerSeries& power, const LoadProfile& profile, const SimulationConfig& cfg,
         const std::string& kernel) { return useful_fraction(power, profile, cfg, parse_kernel(kernel)); },
      py::arg("power"), py::arg("profile"), py::arg("cfg"), py::arg("kernel") = "fast",
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "capacity_sweep",
      [](const std::vector<WindPowerSeries>& powers, const LoadProfile& profile, const std::vector<double>& capacities,
         const std::string& kernel, std::size_t starts) {
        return capacity_sweep(powers, profile, capacities, parse_kernel(kernel), starts);
      },
      py::arg("powers"), py::arg("profile"), py::arg("capacities"), py::arg("kernel") = "fast",
      py::arg("starts") = kStartsPerYear, py::call_guard<py::gil_scoped_release>());

  // analysis
  m.def(
      "hourly_entropy",
      [](const std::vector<bool>& mask, const std::string& first_start) {
        const auto h = hourly_entropy(mask, StartCalendar(parse_iso_timestamp(first_start)));
        return py::make_tuple(h.hourly_counts, h.normalized_entropy);
      },
      py::arg("mask"), py::arg("first_start") = "2021-01-01T00:00:00",
      "Returns (hourly_counts, normalized_entropy); the entropy is None when no start is suitable.");
  m.def(
      "monthly_distribution",
      [](const std::vector<bool>& mask, const std::string& first_start) {
        return monthly_distribution(mask, StartCalendar(parse_iso_timestamp(first_start)));
      },
      py::arg("mask"), py::arg("first_start") = "2021-01-01T00:00:00");
  m.def("monthly_mean_speed", &monthly_mean_speed, py::arg("series"));
  m.def(
      "shannon_entropy", [](const std::vector<std::size_t>& counts) { return shannon_entropy(counts); },
      py::arg("counts"));
  m.def(
      "summarize",
      [](const std::vector<double>& values) {
        const auto s = summarize(values);
        return py::make_tuple(s.min, s.max, s.mean, s.std);
      },
      py::arg("values"), "Returns (min, max, mean, population std).");

  // atlas
  py::class_<StationAtlasEntry>(m, "StationAtlasEntry")
      .def(py::init([](StationMeta meta, double rho, std::optional<double> entropy, double battery_wh,
                       std::string load) {
             StationAtlasEntry e;
             e.meta = std::move(meta);
             e.rho = rho;
             e.normalized_entropy = entropy;
             e.battery_capacity_wh = battery_wh;
             e.load_name = std::move(load);
             return e;
           }),
           py::arg("meta"), py::arg("rho"), py::arg("normalized_entropy") = std::nullopt,
           py::arg("battery_wh") = 0.0, py::arg("load") = "")
      .def_readwrite("meta", &StationAtlasEntry::meta)
      .def_readwrite("rho", &StationAtlasEntry::rho)
      .def_readwrite("normalized_entropy", &StationAtlasEntry::normalized_entropy)
      .def_readwrite("hourly_counts", &StationAtlasEntry::hourly_counts)
      .def_readwrite("monthly_counts", &StationAtlasEntry::monthly_counts)
      .def_readwrite("battery_capacity_wh", &StationAtlasEntry::battery_capacity_wh)
      .def_readwrite("load_name", &StationAtlasEntry::load_name);

  py::class_<MapStyle>(m, "MapStyle")
      .def(py::init<>())
      .def_readwrite("width", &MapStyle::width)
      .def_readwrite("height", &MapStyle::height)
      .def_readwrite("max_radius", &MapStyle::max_radius)
      .def_readwrite("omit_zero", &MapStyle::omit_zero)
      .def_readwrite("fill", &MapStyle::fill);

  m.def(
      "to_geojson", [](const std::vector<StationAtlasEntry>& e) { return to_geojson(e); }, py::arg("entries"));
  m.def(
      "parse_geojson", [](std::string_view text) { return parse_geojson(text); }, py::arg("text"));
  m.def(
      "to_atlas_csv", [](const std::vector<StationAtlasEntry>& e) { return to_atlas_csv(e); }, py::arg("entries"));
  m.def(
      "to_svg_map",
      [](const std::vector<StationAtlasEntry>& e, const MapStyle& style) {
        auto map = to_svg_map(e, style);
        return py::make_tuple(map.svg, map.warnings);
      },
      py::arg("entries"), py::arg("style") = MapStyle{}, "Returns (svg_text, warnings).");
}
