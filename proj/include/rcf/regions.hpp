#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rcf/calendar.hpp"

namespace rcf {

enum class Region { western, mid_atlantic, southern, external };
enum class Fuel { coal, natural_gas, nuclear, other };
enum class Season { winter, non_winter };

inline constexpr std::array<Region, 4> kAllRegions = {Region::western, Region::mid_atlantic, Region::southern,
                                                      Region::external};
inline constexpr std::array<Fuel, 4> kAllFuels = {Fuel::coal, Fuel::natural_gas, Fuel::nuclear, Fuel::other};

std::string_view to_string(Region r);
std::string_view to_string(Fuel f);
std::string_view to_string(Season s);
std::optional<Region> region_from_string(std::string_view text);
std::optional<Fuel> fuel_from_string(std::string_view text);

/// Two-letter USPS code of one of the 50 states or DC.
bool is_us_state_code(std::string_view code);

struct PeakHours {
  int first = 7;  // hour-beginning, inclusive
  int last = 22;  // hour-beginning, inclusive

  [[nodiscard]] bool contains(int hour) const { return first <= hour && hour <= last; }
  [[nodiscard]] int count() const { return last - first + 1; }
  auto operator<=>(const PeakHours&) const = default;
};

/// Everything the pipeline needs to know about geography, fuels and the
/// calendar. Immutable once loaded; share it freely.
struct RegionConfig {
  std::map<std::string, Region> region_of_state;
  /// Explicit plant placements; these win over the state lookup. PJM regions
  /// follow load zones, which split some states.
  std::map<long, Region> region_of_plant;
  std::map<Region, std::vector<std::string>> gas_states;
  /// Upper-case raw fuel code -> normalized fuel.
  std::map<std::string, Fuel> fuel_map;
  std::set<int> winter_months;
  double capacity_threshold_mw = 200.0;
  PeakHours peak_hours;
  MonthRange study_window;
  /// Month at which selection capacity-by-fuel is reported; the window's last
  /// month when unset.
  std::optional<YearMonth> summary_month;

  /// States not listed anywhere fall outside PJM.
  [[nodiscard]] Region region_of(std::string_view state) const;
  [[nodiscard]] Region region_of(long plant_id, std::string_view state) const;

  /// Maps a raw energy-source code. Unknown codes that already spell a
  /// normalized label are accepted as such; anything else is `other`.
  [[nodiscard]] Fuel normalize_fuel(std::string_view raw) const;

  [[nodiscard]] YearMonth reference_month() const { return summary_month.value_or(study_window.last); }

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;
};

RegionConfig default_config();

Season season_of(YearMonth m, const RegionConfig& config);

/// Applies `key = value` lines on top of `base`. See docs/configuration.md
/// for the keys. Unknown keys, malformed values and a state listed in two
/// regions are all ConfigErrors. The result is validated.
RegionConfig parse_config(std::string_view text, RegionConfig base = default_config());
RegionConfig load_config_file(const std::string& path, RegionConfig base = default_config());

/// Writes every field in the format parse_config reads back.
std::string format_config(const RegionConfig& config);

}  // namespace rcf
