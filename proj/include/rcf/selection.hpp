#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "rcf/calendar.hpp"
#include "rcf/ingest.hpp"
#include "rcf/regions.hpp"

namespace rcf {

/// Plant-level view assembled from the generation and capacity tables.
struct PlantProfile {
  long plant_id = 0;
  std::string state;
  Region region = Region::external;
  std::map<YearMonth, double> monthly_total_capacity;  // MW, summed over fuels
  std::map<YearMonth, std::map<Fuel, double>> monthly_fuel_capacity;  // MW
  std::set<Fuel> fuels_present;
  std::set<YearMonth> months_with_generation;
  /// Generation reported but never any capacity.
  bool missing_capacity = false;

  /// Mean of monthly_total_capacity over the months that report capacity;
  /// zero when there are none.
  [[nodiscard]] double mean_capacity_mw() const;
};

struct SelectedPlant {
  long plant_id = 0;
  std::string state;
  double mean_capacity_mw = 0.0;
};

struct SelectionResult {
  Region region = Region::external;
  std::set<long> plant_ids;
  std::vector<SelectedPlant> plants;  // sorted by plant_id
  YearMonth reference_month;
  /// GW per fuel at reference_month. All four fuels are always present.
  std::map<Fuel, double> total_capacity_by_fuel;
  /// GW at reference_month summed plant by plant over total capacity; equals
  /// the sum of total_capacity_by_fuel up to rounding.
  double total_capacity_gw = 0.0;
  std::vector<std::string> notes;

  [[nodiscard]] std::size_t plant_count() const { return plant_ids.size(); }
  [[nodiscard]] bool empty() const { return plant_ids.empty(); }
};

/// One profile per plant seen in either table, ordered by plant_id. A plant
/// reported under two states is a DataError.
std::vector<PlantProfile> build_profiles(const std::vector<GenerationRecord>& gen,
                                         const std::vector<CapacityRecord>& cap, const RegionConfig& config);

/// Keeps the plants that (a) sit in `region`, (b) average strictly more than
/// the capacity threshold over their reporting months, and (c) report
/// generation at least once. The capacity-by-fuel summary is evaluated at the
/// config's reference month. An empty selection is returned as such, with a
/// note.
SelectionResult select_plants(const std::vector<PlantProfile>& profiles, Region region, const RegionConfig& config);

std::string format_selected_plants(const SelectionResult& selection);

/// One row per (region, fuel) plus a total row per region.
std::string format_capacity_by_fuel(const std::vector<SelectionResult>& selections);

}  // namespace rcf
