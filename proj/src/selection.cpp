#include "rcf/selection.hpp"

#include <algorithm>

#include <fmt/core.h>

#include "rcf/error.hpp"

namespace rcf {

double PlantProfile::mean_capacity_mw() const {
  if (monthly_total_capacity.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [month, mw] : monthly_total_capacity) sum += mw;
  return sum / static_cast<double>(monthly_total_capacity.size());
}

namespace {

PlantProfile& profile_for(std::map<long, PlantProfile>& profiles, long plant_id, const std::string& state,
                          const RegionConfig& config) {
  auto [it, inserted] = profiles.try_emplace(plant_id);
  auto& p = it->second;
  if (inserted) {
    p.plant_id = plant_id;
    p.state = state;
    p.region = config.region_of(plant_id, state);
  } else if (p.state != state) {
    throw DataError(fmt::format("plant {} is reported in both {} and {}", plant_id, p.state, state));
  }
  return p;
}

}  // namespace

std::vector<PlantProfile> build_profiles(const std::vector<GenerationRecord>& gen,
                                         const std::vector<CapacityRecord>& cap, const RegionConfig& config) {
  std::map<long, PlantProfile> profiles;
  for (const auto& r : cap) {
    auto& p = profile_for(profiles, r.plant_id, r.state, config);
    p.monthly_total_capacity[r.month] += r.capacity_mw;
    p.monthly_fuel_capacity[r.month][r.fuel] += r.capacity_mw;
    p.fuels_present.insert(r.fuel);
  }
  for (const auto& r : gen) {
    auto& p = profile_for(profiles, r.plant_id, r.state, config);
    p.months_with_generation.insert(r.month);
    p.fuels_present.insert(r.fuel);
  }
  std::vector<PlantProfile> out;
  out.reserve(profiles.size());
  for (auto& [id, p] : profiles) {
    p.missing_capacity = p.monthly_total_capacity.empty() && !p.months_with_generation.empty();
    out.push_back(std::move(p));
  }
  return out;
}

SelectionResult select_plants(const std::vector<PlantProfile>& profiles, Region region, const RegionConfig& config) {
  SelectionResult result;
  result.region = region;
  result.reference_month = config.reference_month();
  for (Fuel f : kAllFuels) result.total_capacity_by_fuel[f] = 0.0;

  std::size_t without_reference = 0;
  for (const auto& p : profiles) {
    if (p.region != region) continue;
    double mean = p.mean_capacity_mw();
    if (!(mean > config.capacity_threshold_mw)) continue;
    if (p.months_with_generation.empty()) continue;

    result.plant_ids.insert(p.plant_id);
    result.plants.push_back({p.plant_id, p.state, mean});
    if (auto it = p.monthly_fuel_capacity.find(result.reference_month); it != p.monthly_fuel_capacity.end()) {
      for (const auto& [fuel, mw] : it->second) result.total_capacity_by_fuel[fuel] += mw / 1000.0;
      result.total_capacity_gw += p.monthly_total_capacity.at(result.reference_month) / 1000.0;
    } else {
      ++without_reference;
    }
  }
  std::sort(result.plants.begin(), result.plants.end(),
            [](const SelectedPlant& a, const SelectedPlant& b) { return a.plant_id < b.plant_id; });

  if (result.empty()) {
    result.notes.push_back(fmt::format("no plant in region {} meets the selection criteria", to_string(region)));
  }
  if (without_reference > 0) {
    result.notes.push_back(fmt::format("{} selected plant(s) report no capacity in {}; counted as 0 MW",
                                       without_reference, result.reference_month.to_string()));
  }
  return result;
}

std::string format_selected_plants(const SelectionResult& selection) {
  std::string out = "plant_id,state,region,mean_capacity_mw\n";
  for (const auto& p : selection.plants) {
    out += fmt::format("{},{},{},{}\n", p.plant_id, p.state, to_string(selection.region), p.mean_capacity_mw);
  }
  return out;
}

std::string format_capacity_by_fuel(const std::vector<SelectionResult>& selections) {
  std::string out = "region,fuel,capacity_gw,reference_month,plant_count\n";
  for (const auto& s : selections) {
    for (const auto& [fuel, gw] : s.total_capacity_by_fuel) {
      out += fmt::format("{},{},{},{},{}\n", to_string(s.region), to_string(fuel), gw, s.reference_month.to_string(),
                         s.plant_count());
    }
    out += fmt::format("{},total,{},{},{}\n", to_string(s.region), s.total_capacity_gw,
                       s.reference_month.to_string(), s.plant_count());
  }
  return out;
}

}  // namespace rcf
