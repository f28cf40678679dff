#pragma once

// Text formats.
//   configuration:  {"support": [[site, state], ...]}
//   antichain:      {"elements": [[[site, state], ...], ...]}
//   event log:      JSON lines {"t": "<hex float>", "kind": ..., "sites": [...]},
//                   preceded by '#' header lines
//   custom map:     {"window": [sites], "table": {"01": "11", ...}, "rate": r}
// Times are written as C99 hex floats so a log replays bit-exactly.

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "monodual/antichain.hpp"
#include "monodual/configuration.hpp"
#include "monodual/graphical.hpp"
#include "monodual/localmap.hpp"

namespace monodual {

nlohmann::json config_to_json(const Configuration& x);
Configuration config_from_json(const nlohmann::json& j, std::size_t num_sites, Level levels);

nlohmann::json antichain_to_json(const Antichain& Y);
Antichain antichain_from_json(const nlohmann::json& j, std::size_t num_sites, Level levels);

std::string hex_double(double v);
double parse_hex_double(const std::string& s);

nlohmann::json event_to_json(const EventLog& log, const Event& e);
// Header lines (each starting with "# ") then one JSON object per event.
void write_event_log(std::ostream& os, const EventLog& log, const std::vector<std::string>& header = {});
// Events are matched against `family`; the window is (start, end].
EventLog read_event_log(std::istream& in, FamilyPtr family, double start, double end);

// Table rows not listed map to themselves.
LocalMap custom_map_from_json(const nlohmann::json& j, Level levels);
nlohmann::json custom_map_to_json(const LocalMap& m);
// A JSON array of custom maps, each with a "rate".
std::vector<RatedMap> rated_maps_from_json(const nlohmann::json& j, Level levels);

}  // namespace monodual
