#include "rcf/analysis.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "rcf/error.hpp"

namespace rcf {

std::string_view to_string(SlopeOrder order) {
  switch (order) {
    case SlopeOrder::first_larger:
      return "first_larger";
    case SlopeOrder::second_larger:
      return "second_larger";
    case SlopeOrder::equal:
      return "equal";
  }
  return "equal";
}

AlignedPairs align(const MonthlySeries& x, const MonthlySeries& y) {
  AlignedPairs out{x.label, y.label, {}};
  auto xi = x.points.begin();
  auto yi = y.points.begin();
  while (xi != x.points.end() && yi != y.points.end()) {
    if (xi->month < yi->month) {
      ++xi;
    } else if (yi->month < xi->month) {
      ++yi;
    } else {
      out.pairs.push_back({xi->month, xi->value, yi->value});
      ++xi;
      ++yi;
    }
  }
  return out;
}

namespace {

/// Centered second moments, two-pass.
struct Moments {
  double mean_x = 0.0, mean_y = 0.0;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
};

Moments moments(const AlignedPairs& pairs) {
  Moments m;
  const auto n = static_cast<double>(pairs.size());
  // Shifted by the first point so constant columns give exact zeros.
  const double x0 = pairs.pairs.front().x, y0 = pairs.pairs.front().y;
  for (const auto& p : pairs.pairs) {
    m.mean_x += p.x - x0;
    m.mean_y += p.y - y0;
  }
  m.mean_x = x0 + m.mean_x / n;
  m.mean_y = y0 + m.mean_y / n;
  for (const auto& p : pairs.pairs) {
    const double dx = p.x - m.mean_x, dy = p.y - m.mean_y;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  return m;
}

void require_points(const AlignedPairs& pairs, std::string_view what) {
  if (pairs.size() < 2) {
    throw AnalysisError(fmt::format("{} of {} vs {} needs at least 2 points, got {}", what, pairs.y_label,
                                    pairs.x_label, pairs.size()));
  }
}

}  // namespace

double pearson(const AlignedPairs& pairs) {
  require_points(pairs, "correlation");
  auto m = moments(pairs);
  if (m.sxx == 0.0 || m.syy == 0.0) {
    throw AnalysisError(fmt::format("correlation of {} vs {} undefined: zero variance in {}", pairs.y_label,
                                    pairs.x_label, m.sxx == 0.0 ? pairs.x_label : pairs.y_label));
  }
  return std::clamp(m.sxy / std::sqrt(m.sxx * m.syy), -1.0, 1.0);
}

SeasonalPairs seasonal_split(const AlignedPairs& pairs, const RegionConfig& config) {
  SeasonalPairs out{{pairs.x_label, pairs.y_label, {}}, {pairs.x_label, pairs.y_label, {}}};
  for (const auto& p : pairs.pairs) {
    (season_of(p.month, config) == Season::winter ? out.winter : out.non_winter).pairs.push_back(p);
  }
  return out;
}

RegressionFit ols_fit(const AlignedPairs& pairs) {
  require_points(pairs, "regression");
  auto m = moments(pairs);
  if (m.sxx == 0.0) {
    throw AnalysisError(
        fmt::format("regression of {} on {} is degenerate: {} has zero variance", pairs.y_label, pairs.x_label,
                    pairs.x_label));
  }
  RegressionFit fit;
  fit.n = pairs.size();
  fit.slope = m.sxy / m.sxx;
  fit.intercept = m.mean_y - fit.slope * m.mean_x;

  double ss_res = 0.0;
  for (const auto& p : pairs.pairs) {
    const double r = p.y - (fit.intercept + fit.slope * p.x);
    ss_res += r * r;
  }
  if (m.syy == 0.0) {
    fit.r_squared = ss_res == 0.0 ? 1.0 : 0.0;
  } else {
    fit.r_squared = std::clamp(1.0 - ss_res / m.syy, 0.0, 1.0);
  }
  return fit;
}

SlopeComparison compare_slopes(const RegressionFit& a, const RegressionFit& b) {
  SlopeComparison out;
  out.difference = std::abs(a.slope - b.slope);
  if (a.slope > b.slope) {
    out.order = SlopeOrder::first_larger;
  } else if (b.slope > a.slope) {
    out.order = SlopeOrder::second_larger;
  } else {
    out.order = SlopeOrder::equal;
  }
  return out;
}

}  // namespace rcf
