#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rcf/calendar.hpp"
#include "rcf/ingest.hpp"
#include "rcf/regions.hpp"
#include "rcf/selection.hpp"

namespace rcf {

enum class Unit { dimensionless, mw, usd_per_mmbtu };

std::string_view to_string(Unit unit);

struct SeriesPoint {
  YearMonth month;
  double value = 0.0;
  std::size_t coverage = 0;  // contributing records
  std::size_t excluded = 0;  // records seen for the month but left out
  std::size_t warnings = 0;

  bool operator==(const SeriesPoint&) const = default;
};

/// Month-indexed values with per-point provenance. Months are strictly
/// increasing.
struct MonthlySeries {
  std::string label;
  Unit unit = Unit::dimensionless;
  std::vector<SeriesPoint> points;
  /// Series-level diagnostics, e.g. months that had to be omitted.
  std::vector<std::string> warnings;

  [[nodiscard]] bool empty() const { return points.empty(); }
  [[nodiscard]] std::size_t size() const { return points.size(); }
  [[nodiscard]] const SeriesPoint* find(YearMonth m) const;
};

struct RcfQuery {
  Region region = Region::western;
  /// Fuels that contribute. Empty means every fuel.
  std::set<Fuel> fuels;
  MonthRange window;
};

/// RCF below/above these bounds earns a data-quality warning on the point.
inline constexpr double kRcfLowerWarning = -0.05;
inline constexpr double kRcfUpperWarning = 1.05;

/// Regional capacity factor per month:
///
///   sum of net generation / (sum of capacity x hours in month)
///
/// over the selected plants' plant-fuel pairs. A pair contributes to a month
/// only when it has both a generation and a capacity record for that month;
/// otherwise it is counted in `excluded`. Months with a zero denominator are
/// omitted with a series warning. Summation runs in (plant_id, fuel) order.
///
/// Throws DataError for an empty selection and ConfigError when the query
/// window leaves the study window.
MonthlySeries compute_rcf(const SelectionResult& selection, const std::vector<GenerationRecord>& gen,
                          const std::vector<CapacityRecord>& cap, const RcfQuery& query, const RegionConfig& config);

/// Monthly peak-hour system load: mean of the hourly loads whose hour falls in
/// the configured peak range. With a complete month this is the sum over
/// days and peak hours divided by (peak hours x days). Days missing a peak
/// hour are averaged over what is present and counted in `warnings`.
MonthlySeries compute_monthly_load(const std::vector<HourlyLoadRecord>& load, const MonthRange& window,
                                   const RegionConfig& config);

/// Unweighted mean of the region's configured gas-state prices per month.
/// Months missing some states average the rest; months missing all are
/// omitted.
MonthlySeries compute_regional_gas_price(const std::vector<GasPriceRecord>& prices, Region region,
                                         const MonthRange& window, const RegionConfig& config);

/// CSV: month,value,coverage_count,warnings_count at full precision.
std::string format_series(const MonthlySeries& series);

}  // namespace rcf
