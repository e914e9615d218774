#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rcf/calendar.hpp"
#include "rcf/metrics.hpp"
#include "rcf/regions.hpp"

namespace rcf {

struct AlignedPair {
  YearMonth month;
  double x = 0.0;
  double y = 0.0;

  bool operator==(const AlignedPair&) const = default;
};

/// Months present in both series, in increasing order.
struct AlignedPairs {
  std::string x_label;
  std::string y_label;
  std::vector<AlignedPair> pairs;

  [[nodiscard]] std::size_t size() const { return pairs.size(); }
  [[nodiscard]] bool empty() const { return pairs.empty(); }
};

struct RegressionFit {
  double slope = 0.0;      // y units per x unit (per MW for load)
  double intercept = 0.0;  // y units
  double r_squared = 0.0;  // in [0, 1]
  std::size_t n = 0;
};

struct SeasonalPairs {
  AlignedPairs winter;
  AlignedPairs non_winter;
};

enum class SlopeOrder { first_larger, second_larger, equal };

struct SlopeComparison {
  SlopeOrder order = SlopeOrder::equal;
  double difference = 0.0;  // |slope_a - slope_b|
};

std::string_view to_string(SlopeOrder order);

/// Inner join on month.
AlignedPairs align(const MonthlySeries& x, const MonthlySeries& y);

/// Pearson correlation of x and y, clamped to [-1, 1]. Throws AnalysisError
/// when n < 2 or either variable has zero variance.
double pearson(const AlignedPairs& pairs);

SeasonalPairs seasonal_split(const AlignedPairs& pairs, const RegionConfig& config);

/// Ordinary least squares of y on x. R² is 1 - SS_res/SS_tot, taken as 1 when
/// both sums vanish (constant y fitted exactly). Throws AnalysisError when
/// n < 2 or x has zero variance.
RegressionFit ols_fit(const AlignedPairs& pairs);

/// Exact floating equality is a tie; callers wanting a tolerance apply their
/// own.
SlopeComparison compare_slopes(const RegressionFit& a, const RegressionFit& b);

}  // namespace rcf
