#include "rcf/metrics.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include <fmt/core.h>

#include "rcf/error.hpp"

namespace rcf {

std::string_view to_string(Unit unit) {
  switch (unit) {
    case Unit::dimensionless:
      return "dimensionless";
    case Unit::mw:
      return "MW";
    case Unit::usd_per_mmbtu:
      return "USD/MMBtu";
  }
  return "dimensionless";
}

const SeriesPoint* MonthlySeries::find(YearMonth m) const {
  auto it = std::lower_bound(points.begin(), points.end(), m,
                             [](const SeriesPoint& p, YearMonth key) { return p.month < key; });
  return it != points.end() && it->month == m ? &*it : nullptr;
}

namespace {

/// Mean taken about the first value so that a constant input comes back
/// bit-exact; clamped because rounding can otherwise land one ulp outside
/// the observed range.
double stable_mean(const std::vector<double>& values) {
  const double shift = values.front();
  double lo = shift, hi = shift, acc = 0.0;
  for (double v : values) {
    acc += v - shift;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return std::clamp(shift + acc / static_cast<double>(values.size()), lo, hi);
}

std::string fuel_suffix(const std::set<Fuel>& fuels) {
  if (fuels.empty()) return {};
  if (fuels == std::set<Fuel>{Fuel::coal, Fuel::natural_gas}) return "_fossil";
  std::string out;
  for (Fuel f : fuels) out += fmt::format("_{}", to_string(f));
  return out;
}

struct PairedValues {
  std::optional<double> generation;
  std::optional<double> capacity;
};

}  // namespace

MonthlySeries compute_rcf(const SelectionResult& selection, const std::vector<GenerationRecord>& gen,
                          const std::vector<CapacityRecord>& cap, const RcfQuery& query, const RegionConfig& config) {
  if (selection.empty()) {
    throw DataError(fmt::format("cannot compute RCF for {}: the plant selection is empty", to_string(query.region)));
  }
  if (!query.window.valid() || !config.study_window.contains(query.window)) {
    throw ConfigError(fmt::format("RCF window {} is not inside the study window {}", query.window.to_string(),
                                  config.study_window.to_string()));
  }

  MonthlySeries series;
  series.label = fmt::format("rcf_{}{}", to_string(query.region), fuel_suffix(query.fuels));
  series.unit = Unit::dimensionless;

  auto wanted = [&](long plant, Fuel fuel, YearMonth month) {
    return query.window.contains(month) && selection.plant_ids.count(plant) &&
           (query.fuels.empty() || query.fuels.count(fuel));
  };

  // month -> (plant, fuel) -> values; std::map fixes the summation order.
  std::map<YearMonth, std::map<std::pair<long, Fuel>, PairedValues>> by_month;
  for (const auto& r : gen) {
    if (!wanted(r.plant_id, r.fuel, r.month)) continue;
    auto& slot = by_month[r.month][{r.plant_id, r.fuel}].generation;
    slot = slot.value_or(0.0) + r.net_generation_mwh;
  }
  for (const auto& r : cap) {
    if (!wanted(r.plant_id, r.fuel, r.month)) continue;
    auto& slot = by_month[r.month][{r.plant_id, r.fuel}].capacity;
    slot = slot.value_or(0.0) + r.capacity_mw;
  }

  if (by_month.empty()) {
    series.warnings.push_back(
        fmt::format("{}: no selected-plant records in window {}", series.label, query.window.to_string()));
    return series;
  }

  for (YearMonth m = query.window.first; m <= query.window.last; m = m.next()) {
    auto it = by_month.find(m);
    if (it == by_month.end()) {
      series.warnings.push_back(fmt::format("{}: {} omitted, no records", series.label, m.to_string()));
      continue;
    }
    double generation = 0.0, capacity = 0.0;
    SeriesPoint point;
    point.month = m;
    for (const auto& [key, values] : it->second) {
      if (values.generation && values.capacity) {
        generation += *values.generation;
        capacity += *values.capacity;
        ++point.coverage;
      } else {
        ++point.excluded;
      }
    }
    const double denominator = capacity * hours_in_month(m);
    if (denominator == 0.0) {
      series.warnings.push_back(
          fmt::format("{}: {} omitted, zero paired capacity ({} unpaired records)", series.label, m.to_string(),
                      point.excluded));
      continue;
    }
    point.value = generation / denominator;
    if (point.excluded > 0) {
      series.warnings.push_back(fmt::format("{}: {} excluded {} plant-fuel records lacking generation or capacity",
                                            series.label, m.to_string(), point.excluded));
      ++point.warnings;
    }
    if (point.value < kRcfLowerWarning || point.value > kRcfUpperWarning) {
      series.warnings.push_back(
          fmt::format("{}: {} value {:.4f} outside [{}, {}]", series.label, m.to_string(), point.value,
                      kRcfLowerWarning, kRcfUpperWarning));
      ++point.warnings;
    }
    series.points.push_back(point);
  }
  return series;
}

MonthlySeries compute_monthly_load(const std::vector<HourlyLoadRecord>& load, const MonthRange& window,
                                   const RegionConfig& config) {
  MonthlySeries series;
  series.label = "system_load";
  series.unit = Unit::mw;

  std::map<YearMonth, std::map<std::pair<Date, int>, double>> by_month;
  for (const auto& r : load) {
    const auto m = r.date.year_month();
    if (!window.contains(m) || !config.peak_hours.contains(r.hour)) continue;
    by_month[m][{r.date, r.hour}] = r.load_mw;
  }

  const int per_day = config.peak_hours.count();
  for (YearMonth m = window.first; m <= window.last; m = m.next()) {
    auto it = by_month.find(m);
    if (it == by_month.end()) {
      series.warnings.push_back(fmt::format("system_load: {} omitted, no peak-hour records", m.to_string()));
      continue;
    }
    std::vector<double> values;
    std::map<int, int> hours_per_day;
    for (const auto& [key, mw] : it->second) {
      values.push_back(mw);
      ++hours_per_day[key.first.day];
    }
    SeriesPoint point;
    point.month = m;
    point.value = stable_mean(values);
    point.coverage = values.size();
    for (int day = 1; day <= days_in_month(m); ++day) {
      auto d = hours_per_day.find(day);
      if (d == hours_per_day.end() || d->second < per_day) ++point.warnings;
    }
    if (point.warnings > 0) {
      series.warnings.push_back(fmt::format("system_load: {} has {} day(s) with incomplete peak hours ({} of {})",
                                            m.to_string(), point.warnings, point.coverage,
                                            per_day * days_in_month(m)));
    }
    series.points.push_back(point);
  }
  return series;
}

MonthlySeries compute_regional_gas_price(const std::vector<GasPriceRecord>& prices, Region region,
                                         const MonthRange& window, const RegionConfig& config) {
  auto states_it = config.gas_states.find(region);
  if (states_it == config.gas_states.end() || states_it->second.empty()) {
    throw ConfigError(fmt::format("no gas states configured for region {}", to_string(region)));
  }
  const auto& states = states_it->second;

  MonthlySeries series;
  series.label = fmt::format("gas_price_{}", to_string(region));
  series.unit = Unit::usd_per_mmbtu;

  std::map<std::pair<YearMonth, std::string>, double> lookup;
  for (const auto& r : prices) {
    if (window.contains(r.month)) lookup[{r.month, r.state}] = r.price_usd_per_mmbtu;
  }

  for (YearMonth m = window.first; m <= window.last; m = m.next()) {
    std::vector<double> values;
    std::vector<std::string> missing;
    for (const auto& s : states) {
      if (auto it = lookup.find({m, s}); it != lookup.end()) {
        values.push_back(it->second);
      } else {
        missing.push_back(s);
      }
    }
    if (values.empty()) {
      series.warnings.push_back(fmt::format("{}: {} omitted, no configured state prices", series.label,
                                            m.to_string()));
      continue;
    }
    SeriesPoint point{m, stable_mean(values), values.size(), missing.size(), 0};
    if (!missing.empty()) {
      point.warnings = 1;
      std::string list;
      for (const auto& s : missing) list += (list.empty() ? "" : " ") + s;
      series.warnings.push_back(fmt::format("{}: {} missing prices for {}", series.label, m.to_string(), list));
    }
    series.points.push_back(point);
  }
  return series;
}

std::string format_series(const MonthlySeries& series) {
  std::string out = "month,value,coverage_count,warnings_count\n";
  for (const auto& p : series.points) {
    out += fmt::format("{},{},{},{}\n", p.month.to_string(), p.value, p.coverage, p.warnings);
  }
  return out;
}

}  // namespace rcf
