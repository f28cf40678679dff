#include "monodual/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>

namespace monodual {

using nlohmann::json;

json config_to_json(const Configuration& x) {
  json support = json::array();
  for (const auto& e : x.entries()) support.push_back({e.site, e.level});
  return json{{"support", std::move(support)}};
}

namespace {

Configuration entries_from_json(const json& list, std::size_t num_sites, Level levels) {
  if (!list.is_array()) throw ConfigError("configuration support must be an array of [site, state] pairs");
  std::vector<Entry> entries;
  for (const auto& pair : list) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_unsigned() || !pair[1].is_number_unsigned())
      throw ConfigError("configuration entries must be [site, state] with nonnegative integers");
    const auto site = pair[0].get<std::uint64_t>();
    const auto state = pair[1].get<std::uint64_t>();
    if (site >= num_sites) throw ConfigError("site " + std::to_string(site) + " is off the grid");
    if (state > levels) throw ConfigError("state " + std::to_string(state) + " exceeds the top level");
    entries.push_back({static_cast<Site>(site), static_cast<Level>(state)});
  }
  return Configuration::from_entries(num_sites, levels, std::move(entries));
}

}  // namespace

Configuration config_from_json(const json& j, std::size_t num_sites, Level levels) {
  if (!j.is_object() || !j.contains("support")) throw ConfigError("configuration JSON needs a \"support\" field");
  return entries_from_json(j.at("support"), num_sites, levels);
}

json antichain_to_json(const Antichain& Y) {
  json elems = json::array();
  for (const auto& y : Y.elements()) elems.push_back(config_to_json(y).at("support"));
  return json{{"elements", std::move(elems)}};
}

Antichain antichain_from_json(const json& j, std::size_t num_sites, Level levels) {
  if (!j.is_object() || !j.contains("elements") || !j.at("elements").is_array())
    throw ConfigError("antichain JSON needs an \"elements\" array");
  std::vector<Configuration> elems;
  for (const auto& e : j.at("elements")) elems.push_back(entries_from_json(e, num_sites, levels));
  return Antichain::minimalize(num_sites, levels, std::move(elems));
}

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hex_double(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw ConfigError("'" + s + "' is not a valid floating-point time");
  return v;
}

json event_to_json(const EventLog& log, const Event& e) {
  const auto& m = log.family().map(e.map);
  return json{{"t", hex_double(e.time)}, {"kind", kind_name(m.kind())}, {"sites", m.window()}};
}

void write_event_log(std::ostream& os, const EventLog& log, const std::vector<std::string>& header) {
  for (const auto& h : header) os << "# " << h << '\n';
  os << "# window " << hex_double(log.start()) << ' ' << hex_double(log.end()) << '\n';
  for (const auto& e : log.events()) os << event_to_json(log, e).dump() << '\n';
}

namespace {

LocalMap builtin_from(const std::string& kind, const std::vector<Site>& sites) {
  if (kind == "dth" && sites.size() == 1) return LocalMap::death(sites[0]);
  if (kind == "bra" && sites.size() == 2) return LocalMap::branch(sites[0], sites[1]);
  if (kind == "coop" && sites.size() == 3) return LocalMap::coop(sites[0], sites[1], sites[2]);
  throw ConfigError("event kind '" + kind + "' with " + std::to_string(sites.size()) + " sites is not valid");
}

}  // namespace

EventLog read_event_log(std::istream& in, FamilyPtr family, double start, double end) {
  if (!family) throw ConfigError("reading a log needs a family");
  std::vector<Event> events;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ConfigError("event log line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.contains("t") || !j.contains("kind") || !j.contains("sites"))
      throw ConfigError("event log line " + std::to_string(lineno) + " needs t, kind and sites");
    const double t = j.at("t").is_string() ? parse_hex_double(j.at("t").get<std::string>()) : j.at("t").get<double>();
    const auto kind = j.at("kind").get<std::string>();
    const auto sites = j.at("sites").get<std::vector<Site>>();
    std::optional<std::uint32_t> idx;
    if (kind == "custom") {
      for (std::size_t k = 0; k < family->size() && !idx; ++k)
        if (family->map(k).kind() == MapKind::Custom && family->map(k).window() == sites)
          idx = static_cast<std::uint32_t>(k);
    } else {
      idx = family->find(builtin_from(kind, sites));
    }
    if (!idx) throw ConfigError("event log line " + std::to_string(lineno) + " names a map outside the family");
    events.push_back({t, *idx});
  }
  return EventLog(std::move(family), start, end, std::move(events));
}

LocalMap custom_map_from_json(const json& j, Level levels) {
  if (!j.is_object() || !j.contains("window") || !j.contains("table"))
    throw ConfigError("custom map JSON needs \"window\" and \"table\"");
  const auto window = j.at("window").get<std::vector<Site>>();
  if (window.empty() || window.size() > kMaxCustomWindow)
    throw ConfigError("custom map window must have 1 to " + std::to_string(kMaxCustomWindow) + " sites");
  const unsigned radix = unsigned{levels} + 1;
  std::size_t rows = 1;
  for (std::size_t k = 0; k < window.size(); ++k) rows *= radix;
  std::vector<std::uint32_t> table(rows);
  for (std::size_t c = 0; c < rows; ++c) table[c] = static_cast<std::uint32_t>(c);

  auto decode = [&](const std::string& digits) {
    if (digits.size() != window.size()) throw ConfigError("tuple '" + digits + "' does not match the window length");
    std::uint32_t code = 0;
    for (char ch : digits) {
      if (ch < '0' || static_cast<unsigned>(ch - '0') >= radix)
        throw ConfigError("tuple '" + digits + "' has a digit outside the state space");
      code = code * radix + static_cast<unsigned>(ch - '0');
    }
    return code;
  };
  const auto& rows_json = j.at("table");
  if (!rows_json.is_object()) throw ConfigError("custom map table must be an object of tuple strings");
  for (const auto& [in, out] : rows_json.items()) table[decode(in)] = decode(out.get<std::string>());
  return LocalMap::custom(window, std::move(table), levels);
}

json custom_map_to_json(const LocalMap& m) {
  if (m.kind() != MapKind::Custom) throw ConfigError("only custom maps have a table form");
  const auto window = m.window();
  const unsigned radix = unsigned{m.custom_levels()} + 1;
  auto encode = [&](std::uint32_t code) {
    std::string s(window.size(), '0');
    for (std::size_t k = window.size(); k-- > 0;) {
      s[k] = static_cast<char>('0' + code % radix);
      code /= radix;
    }
    return s;
  };
  json table = json::object();
  const auto t = m.custom_table();
  for (std::uint32_t c = 0; c < t.size(); ++c)
    if (t[c] != c) table[encode(c)] = encode(t[c]);
  return json{{"window", window}, {"table", std::move(table)}};
}

std::vector<RatedMap> rated_maps_from_json(const json& j, Level levels) {
  if (!j.is_array()) throw ConfigError("expected a JSON array of custom maps");
  std::vector<RatedMap> out;
  for (const auto& item : j) {
    if (!item.contains("rate") || !item.at("rate").is_number()) throw ConfigError("each custom map needs a rate");
    out.push_back({custom_map_from_json(item, levels), item.at("rate").get<double>()});
  }
  return out;
}

}  // namespace monodual
