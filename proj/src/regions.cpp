#include "rcf/regions.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "rcf/error.hpp"
#include "text_util.hpp"

namespace rcf {

using detail::split;
using detail::trim;

std::string_view to_string(Region r) {
  switch (r) {
    case Region::western:
      return "western";
    case Region::mid_atlantic:
      return "mid_atlantic";
    case Region::southern:
      return "southern";
    case Region::external:
      return "external";
  }
  return "external";
}

std::string_view to_string(Fuel f) {
  switch (f) {
    case Fuel::coal:
      return "coal";
    case Fuel::natural_gas:
      return "natural_gas";
    case Fuel::nuclear:
      return "nuclear";
    case Fuel::other:
      return "other";
  }
  return "other";
}

std::string_view to_string(Season s) { return s == Season::winter ? "winter" : "non_winter"; }

std::optional<Region> region_from_string(std::string_view text) {
  for (Region r : kAllRegions) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

std::optional<Fuel> fuel_from_string(std::string_view text) {
  for (Fuel f : kAllFuels) {
    if (to_string(f) == text) return f;
  }
  return std::nullopt;
}

bool is_us_state_code(std::string_view code) {
  static constexpr std::array<std::string_view, 51> kCodes = {
      "AK", "AL", "AR", "AZ", "CA", "CO", "CT", "DC", "DE", "FL", "GA", "HI", "IA", "ID", "IL", "IN", "KS",
      "KY", "LA", "MA", "MD", "ME", "MI", "MN", "MO", "MS", "MT", "NC", "ND", "NE", "NH", "NJ", "NM", "NV",
      "NY", "OH", "OK", "OR", "PA", "RI", "SC", "SD", "TN", "TX", "UT", "VA", "VT", "WA", "WI", "WV", "WY"};
  return std::binary_search(kCodes.begin(), kCodes.end(), code);
}

Region RegionConfig::region_of(std::string_view state) const {
  auto it = region_of_state.find(std::string(state));
  return it == region_of_state.end() ? Region::external : it->second;
}

Region RegionConfig::region_of(long plant_id, std::string_view state) const {
  if (auto it = region_of_plant.find(plant_id); it != region_of_plant.end()) return it->second;
  return region_of(state);
}

Fuel RegionConfig::normalize_fuel(std::string_view raw) const {
  auto code = detail::to_upper(trim(raw));
  if (auto it = fuel_map.find(code); it != fuel_map.end()) return it->second;
  if (auto f = fuel_from_string(detail::to_lower(trim(raw)))) return *f;
  return Fuel::other;
}

void RegionConfig::validate() const {
  for (const auto& [state, region] : region_of_state) {
    if (!is_us_state_code(state)) throw ConfigError(fmt::format("'{}' is not a U.S. state code", state));
  }
  for (Region r : {Region::western, Region::mid_atlantic}) {
    auto it = gas_states.find(r);
    if (it == gas_states.end() || it->second.empty()) {
      throw ConfigError(fmt::format("gas_states.{} must list at least one state", to_string(r)));
    }
  }
  for (const auto& [region, states] : gas_states) {
    for (const auto& s : states) {
      if (!is_us_state_code(s)) {
        throw ConfigError(fmt::format("gas_states.{}: '{}' is not a U.S. state code", to_string(region), s));
      }
    }
  }
  if (winter_months.empty()) throw ConfigError("winter_months is empty");
  for (int m : winter_months) {
    if (m < 1 || m > 12) throw ConfigError(fmt::format("winter month {} outside 1..12", m));
  }
  if (peak_hours.first < 0 || peak_hours.last > 23 || peak_hours.first > peak_hours.last) {
    throw ConfigError(fmt::format("peak hours {}-{} not an ordered range within 0..23", peak_hours.first,
                                  peak_hours.last));
  }
  if (!(capacity_threshold_mw > 0.0)) throw ConfigError("capacity_threshold_mw must be > 0");
  if (!study_window.valid()) throw ConfigError("study_window ends before it starts");
  if (summary_month && !study_window.contains(*summary_month)) {
    throw ConfigError(fmt::format("summary_month {} outside study window {}", summary_month->to_string(),
                                  study_window.to_string()));
  }
}

RegionConfig default_config() {
  RegionConfig c;
  for (auto s : {"IL", "IN", "MI", "OH", "KY", "WV", "TN"}) c.region_of_state[s] = Region::western;
  for (auto s : {"PA", "NJ", "MD", "DE", "DC"}) c.region_of_state[s] = Region::mid_atlantic;
  for (auto s : {"VA", "NC"}) c.region_of_state[s] = Region::southern;
  c.gas_states[Region::western] = {"IL", "MI", "OH"};
  c.gas_states[Region::mid_atlantic] = {"PA", "NJ", "NY"};
  for (auto code : {"COL", "BIT", "SUB", "LIG", "COAL"}) c.fuel_map[code] = Fuel::coal;
  c.fuel_map["NG"] = Fuel::natural_gas;
  c.fuel_map["NUC"] = Fuel::nuclear;
  c.winter_months = {12, 1, 2};
  c.capacity_threshold_mw = 200.0;
  c.peak_hours = {7, 22};
  c.study_window = {{2015, 7}, {2017, 12}};
  return c;
}

Season season_of(YearMonth m, const RegionConfig& config) {
  return config.winter_months.count(m.month) ? Season::winter : Season::non_winter;
}

namespace {

std::vector<std::string> parse_state_list(std::string_view key, std::string_view value) {
  std::vector<std::string> out;
  if (trim(value).empty()) return out;
  for (auto item : split(value, ',')) {
    auto code = detail::to_upper(item);
    if (!is_us_state_code(code)) throw ConfigError(fmt::format("{}: '{}' is not a U.S. state code", key, item));
    if (std::find(out.begin(), out.end(), code) != out.end()) {
      throw ConfigError(fmt::format("{}: '{}' listed twice", key, code));
    }
    out.push_back(std::move(code));
  }
  return out;
}

Region parse_region(std::string_view key, std::string_view text) {
  auto r = region_from_string(trim(text));
  if (!r) throw ConfigError(fmt::format("{}: unknown region '{}'", key, text));
  return *r;
}

double parse_number(std::string_view key, std::string_view text) {
  auto v = detail::parse_double(text);
  if (!v) throw ConfigError(fmt::format("{}: '{}' is not a number", key, text));
  return *v;
}

template <class F>
auto wrap_parse(std::string_view key, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("{}: {}", key, e.what()));
  }
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

}  // namespace

RegionConfig parse_config(std::string_view text, RegionConfig base) {
  // Region membership is edited as whole lists, then re-inverted so that a
  // state appearing in two lists can be detected.
  std::map<Region, std::vector<std::string>> members;
  for (const auto& [state, region] : base.region_of_state) members[region].push_back(state);

  std::istringstream in{std::string(text)};
  std::string raw_line;
  int line_no = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    auto line = trim(raw_line);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("config line {}: expected 'key = value'", line_no));
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    auto dot = key.find('.');
    auto head = key.substr(0, dot);
    auto tail = dot == std::string_view::npos ? std::string_view{} : key.substr(dot + 1);

    if (head == "region" && !tail.empty()) {
      members[parse_region(key, tail)] = parse_state_list(key, value);
    } else if (head == "gas_states" && !tail.empty()) {
      base.gas_states[parse_region(key, tail)] = parse_state_list(key, value);
    } else if (head == "plant_region" && !tail.empty()) {
      auto id = detail::parse_long(tail);
      if (!id || *id <= 0) throw ConfigError(fmt::format("{}: plant id must be a positive integer", key));
      base.region_of_plant[*id] = parse_region(key, value);
    } else if (head == "fuel_map" && !tail.empty()) {
      auto fuel = fuel_from_string(value);
      if (!fuel) throw ConfigError(fmt::format("{}: unknown fuel '{}'", key, value));
      base.fuel_map[detail::to_upper(tail)] = *fuel;
    } else if (key == "winter_months") {
      base.winter_months.clear();
      for (auto item : split(value, ',')) {
        auto m = detail::parse_long(item);
        if (!m) throw ConfigError(fmt::format("{}: '{}' is not a month number", key, item));
        base.winter_months.insert(static_cast<int>(*m));
      }
    } else if (key == "capacity_threshold_mw") {
      base.capacity_threshold_mw = parse_number(key, value);
    } else if (key == "peak_hours") {
      auto parts = split(value, '-');
      auto a = parts.size() == 2 ? detail::parse_long(parts[0]) : std::nullopt;
      auto b = parts.size() == 2 ? detail::parse_long(parts[1]) : std::nullopt;
      if (!a || !b) throw ConfigError(fmt::format("{}: expected FIRST-LAST, got '{}'", key, value));
      base.peak_hours = {static_cast<int>(*a), static_cast<int>(*b)};
    } else if (key == "study_window") {
      base.study_window = wrap_parse(key, [&] { return MonthRange::parse(value); });
    } else if (key == "summary_month") {
      if (value == "last") {
        base.summary_month.reset();
      } else {
        base.summary_month = wrap_parse(key, [&] { return YearMonth::parse(value); });
      }
    } else {
      throw ConfigError(fmt::format("config line {}: unknown key '{}'", line_no, key));
    }
  }

  base.region_of_state.clear();
  for (const auto& [region, states] : members) {
    for (const auto& s : states) {
      auto [it, inserted] = base.region_of_state.emplace(s, region);
      if (!inserted) {
        throw ConfigError(fmt::format("state {} assigned to both {} and {}", s, to_string(it->second),
                                      to_string(region)));
      }
    }
  }
  base.validate();
  return base;
}

RegionConfig load_config_file(const std::string& path, RegionConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string format_config(const RegionConfig& config) {
  std::string out = "# regions: whole states; plant_region.<id> entries override\n";
  for (Region r : kAllRegions) {
    std::vector<std::string> states;
    for (const auto& [state, region] : config.region_of_state) {
      if (region == r) states.push_back(state);
    }
    if (!states.empty() || r != Region::external) out += fmt::format("region.{} = {}\n", to_string(r), join(states));
  }
  for (const auto& [id, region] : config.region_of_plant) {
    out += fmt::format("plant_region.{} = {}\n", id, to_string(region));
  }
  for (const auto& [region, states] : config.gas_states) {
    out += fmt::format("gas_states.{} = {}\n", to_string(region), join(states));
  }
  for (const auto& [code, fuel] : config.fuel_map) {
    out += fmt::format("fuel_map.{} = {}\n", code, to_string(fuel));
  }
  std::string months;
  for (int m : config.winter_months) months += (months.empty() ? "" : ", ") + std::to_string(m);
  out += fmt::format("winter_months = {}\n", months);
  out += fmt::format("capacity_threshold_mw = {}\n", config.capacity_threshold_mw);
  out += fmt::format("peak_hours = {}-{}\n", config.peak_hours.first, config.peak_hours.last);
  out += fmt::format("study_window = {}\n", config.study_window.to_string());
  out += fmt::format("summary_month = {}\n", config.summary_month ? config.summary_month->to_string() : "last");
  return out;
}

}  // namespace rcf
