#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rcf/analysis.hpp"
#include "rcf/error.hpp"

using namespace rcf;

namespace {

MonthlySeries series(std::string label, std::vector<std::pair<YearMonth, double>> values) {
  MonthlySeries s;
  s.label = std::move(label);
  for (auto [m, v] : values) s.points.push_back({m, v, 1, 0, 0});
  return s;
}

AlignedPairs pairs_of(const std::vector<double>& x, const std::vector<double>& y, YearMonth start = {2016, 1}) {
  AlignedPairs p{"x", "y", {}};
  for (std::size_t i = 0; i < x.size(); ++i) {
    p.pairs.push_back({YearMonth::from_index(start.index() + static_cast<int>(i)), x[i], y[i]});
  }
  return p;
}

}  // namespace

TEST(Align, InnerJoinOnMonth) {
  auto x = series("load", {{{2016, 1}, 10}, {{2016, 2}, 20}, {{2016, 3}, 30}});
  auto y = series("rcf", {{{2016, 2}, 0.5}, {{2016, 3}, 0.6}, {{2016, 4}, 0.7}});
  auto p = align(x, y);
  EXPECT_EQ("load", p.x_label);
  EXPECT_EQ("rcf", p.y_label);
  ASSERT_EQ(2u, p.size());
  EXPECT_EQ((AlignedPair{{2016, 2}, 20, 0.5}), p.pairs[0]);
  EXPECT_EQ((AlignedPair{{2016, 3}, 30, 0.6}), p.pairs[1]);
  EXPECT_TRUE(align(x, series("none", {})).empty());
}

TEST(Pearson, KnownValues) {
  EXPECT_DOUBLE_EQ(1.0, pearson(pairs_of({1, 2, 3}, {2, 4, 6})));
  EXPECT_DOUBLE_EQ(-1.0, pearson(pairs_of({1, 2, 3}, {6, 4, 2})));
  EXPECT_NEAR(0.0, pearson(pairs_of({1, 2, 3, 4}, {1, -1, -1, 1})), 1e-15);
}

TEST(Pearson, DegenerateInputsThrow) {
  EXPECT_THROW(pearson(pairs_of({1, 1, 1}, {1, 2, 3})), AnalysisError);
  EXPECT_THROW(pearson(pairs_of({1, 2, 3}, {5, 5, 5})), AnalysisError);
  EXPECT_THROW(pearson(pairs_of({1}, {1})), AnalysisError);
}

TEST(SeasonalSplit, Cases) {
  const auto config = default_config();
  auto jul_dec = pairs_of({1, 2, 3, 4, 5, 6}, {1, 2, 3, 4, 5, 6}, {2015, 7});
  auto split = seasonal_split(jul_dec, config);
  ASSERT_EQ(1u, split.winter.size());
  EXPECT_EQ((YearMonth{2015, 12}), split.winter.pairs[0].month);
  EXPECT_EQ(5u, split.non_winter.size());

  AlignedPairs januaries{"x", "y", {{{2015, 1}, 1, 1}, {{2016, 1}, 2, 2}, {{2017, 1}, 3, 3}}};
  split = seasonal_split(januaries, config);
  EXPECT_EQ(3u, split.winter.size());
  EXPECT_TRUE(split.non_winter.empty());

  std::vector<double> twelve(12, 1.0);
  split = seasonal_split(pairs_of(twelve, twelve), config);
  EXPECT_EQ(3u, split.winter.size());
  EXPECT_EQ(9u, split.non_winter.size());
  EXPECT_EQ("x", split.winter.x_label);
}

TEST(OlsFit, ExactLine) {
  auto fit = ols_fit(pairs_of({1, 2, 3}, {3, 5, 7}));
  EXPECT_NEAR(2.0, fit.slope, 1e-15);
  EXPECT_NEAR(1.0, fit.intercept, 1e-15);
  EXPECT_NEAR(1.0, fit.r_squared, 1e-15);
  EXPECT_EQ(3u, fit.n);
}

TEST(OlsFit, Triangle) {
  auto fit = ols_fit(pairs_of({0, 1, 2}, {0, 1, 0}));
  EXPECT_NEAR(0.0, fit.slope, 1e-15);
  EXPECT_NEAR(1.0 / 3.0, fit.intercept, 1e-15);
  EXPECT_NEAR(0.0, fit.r_squared, 1e-15);
}

TEST(OlsFit, ConstantResponseIsPerfectFit) {
  auto fit = ols_fit(pairs_of({90000, 100000, 110000}, {0.4, 0.4, 0.4}));
  EXPECT_EQ(0.0, fit.slope);
  EXPECT_EQ(0.4, fit.intercept);
  EXPECT_EQ(1.0, fit.r_squared);
}

TEST(OlsFit, DegenerateInputsThrow) {
  EXPECT_THROW(ols_fit(pairs_of({1}, {1})), AnalysisError);
  EXPECT_THROW(ols_fit(pairs_of({2, 2, 2}, {1, 2, 3})), AnalysisError);
  EXPECT_THROW(ols_fit(AlignedPairs{}), AnalysisError);
}

TEST(CompareSlopes, Orders) {
  auto cmp = compare_slopes({2.0, 0, 1, 3}, {1.5, 0, 1, 3});
  EXPECT_EQ(SlopeOrder::first_larger, cmp.order);
  EXPECT_EQ(0.5, cmp.difference);
  cmp = compare_slopes({1.0, 0, 1, 3}, {1.0, 0, 1, 3});
  EXPECT_EQ(SlopeOrder::equal, cmp.order);
  EXPECT_EQ(0.0, cmp.difference);
  cmp = compare_slopes({-1.0, 0, 1, 3}, {1.0, 0, 1, 3});
  EXPECT_EQ(SlopeOrder::second_larger, cmp.order);
  EXPECT_EQ(2.0, cmp.difference);
}

namespace {

AlignedPairs random_pairs(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> load(70000, 130000);
  std::normal_distribution<double> noise(0.0, 0.05);
  const double slope = std::uniform_real_distribution<double>(-2e-5, 2e-5)(rng);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n; ++i) {
    x.push_back(load(rng));
    y.push_back(0.3 + slope * (x.back() - 100000) + noise(rng));
  }
  return pairs_of(x, y);
}

}  // namespace

TEST(OlsProperties, ResidualsOrthogonalAndRSquaredMatchesPearson) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = random_pairs(rng, 3 + rng() % 40);
    auto fit = ols_fit(p);
    double sum_res = 0.0, sum_res_x = 0.0, scale = 0.0;
    for (const auto& q : p.pairs) {
      const double res = q.y - (fit.intercept + fit.slope * q.x);
      sum_res += res;
      sum_res_x += res * q.x;
      scale += std::abs(q.y) * std::abs(q.x);
    }
    EXPECT_NEAR(0.0, sum_res, 1e-9);
    EXPECT_NEAR(0.0, sum_res_x / scale, 1e-9);
    const double r = pearson(p);
    EXPECT_NEAR(r * r, fit.r_squared, 1e-12);
    EXPECT_GE(fit.r_squared, 0.0);
    EXPECT_LE(fit.r_squared, 1.0);
  }
}

TEST(OlsProperties, ShiftInvariance) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = random_pairs(rng, 3 + rng() % 20);
    auto shifted = p;
    for (auto& q : shifted.pairs) {
      q.x += 5000.0;
      q.y += 0.25;
    }
    auto a = ols_fit(p);
    auto b = ols_fit(shifted);
    EXPECT_NEAR(a.slope, b.slope, 1e-9 * std::abs(a.slope) + 1e-15);
    EXPECT_NEAR(a.r_squared, b.r_squared, 1e-9);
  }
}

TEST(OlsProperties, TwoPointsInterpolate) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1000, 1000);
  for (int trial = 0; trial < 200; ++trial) {
    const double x0 = u(rng), x1 = u(rng), y0 = u(rng), y1 = u(rng);
    if (x0 == x1) continue;
    auto fit = ols_fit(pairs_of({x0, x1}, {y0, y1}));
    const double tol = 1e-9 * (std::abs(y0) + std::abs(y1) + 1);
    EXPECT_NEAR(y0, fit.intercept + fit.slope * x0, tol);
    EXPECT_NEAR(y1, fit.intercept + fit.slope * x1, tol);
    if (y0 != y1) {
      EXPECT_NEAR(1.0, fit.r_squared, 1e-12);
    }
  }
}
