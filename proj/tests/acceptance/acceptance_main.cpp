// Acceptance gate. Prints one PASS/FAIL/SKIP line per criterion.
//
//   rcf_acceptance [--expect-fail ID]...
//
// Exit status is 0 when the set of failing criteria equals the expected set,
// so a known-red criterion stays visible without masking new failures (or a
// silent fix). The real-data criteria need RCF_REAL_DATA_DIR pointing at a
// directory holding manifest.txt; without it they print SKIP.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>
#include <fmt/ranges.h>

#include "rcf/analysis.hpp"
#include "rcf/calendar.hpp"
#include "rcf/error.hpp"
#include "rcf/ingest.hpp"
#include "rcf/metrics.hpp"
#include "rcf/pipeline.hpp"
#include "rcf/selection.hpp"
#include "support/rcf_oracle.hpp"
#include "support/synthetic.hpp"

using namespace rcf;
namespace fs = std::filesystem;

namespace {

// Every tolerance the gate uses.
constexpr double kOracleRelTol = 1e-12;
constexpr double kOracleSeconds = 5.0;
constexpr double kGasTableLoose = 0.015;
constexpr double kGasTableTight = 0.005;
constexpr int kGasTableTightRequired = 5;
constexpr double kPlantCfTol = 1e-4;
constexpr double kOrthogonalityRelTol = 1e-9;
constexpr double kRSquaredTol = 1e-12;
constexpr double kExactLineTol = 1e-12;
constexpr double kClosureRelTol = 1e-9;
constexpr double kRealDataRelTol = 0.10;

enum class Outcome { pass, fail, skip };

struct Verdict {
  Outcome outcome = Outcome::pass;
  std::string detail;
};

Verdict pass(std::string detail) { return {Outcome::pass, std::move(detail)}; }
Verdict fail(std::string detail) { return {Outcome::fail, std::move(detail)}; }
Verdict skip(std::string detail) { return {Outcome::skip, std::move(detail)}; }

struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("rcf_acceptance_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AlignedPairs pairs_of(const std::vector<double>& x, const std::vector<double>& y) {
  AlignedPairs p{"x", "y", {}};
  for (std::size_t i = 0; i < x.size(); ++i) p.pairs.push_back({YearMonth::from_index(YearMonth{2016, 1}.index() + static_cast<int>(i)), x[i], y[i]});
  return p;
}

std::vector<testing::OracleRow> oracle_rows(const std::vector<GenerationRecord>& g) {
  std::vector<testing::OracleRow> out;
  for (const auto& r : g) out.push_back({r.month, r.plant_id, r.fuel, r.net_generation_mwh});
  return out;
}

std::vector<testing::OracleRow> oracle_rows(const std::vector<CapacityRecord>& c) {
  std::vector<testing::OracleRow> out;
  for (const auto& r : c) out.push_back({r.month, r.plant_id, r.fuel, r.capacity_mw});
  return out;
}

// C1: random fleets go through CSV ingest, selection and compute_rcf, and are
// compared with the brute-force definition.
Verdict oracle_equivalence() {
  auto config = default_config();
  config.capacity_threshold_mw = 1e-6;  // keep every generating plant
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> cf(-0.02, 1.0);
  std::uniform_real_distribution<double> mw(5.0, 1500.0);
  const char* states[] = {"IL", "OH", "MI", "IN"};
  const char* codes[] = {"BIT", "NG", "NUC", "WND", "SUB"};
  std::size_t months_checked = 0;
  double worst = 0.0;
  const auto start = std::chrono::steady_clock::now();
  for (int fleet = 0; fleet < 200; ++fleet) {
    const int plants = 1 + static_cast<int>(rng() % 10);
    const int months = 1 + static_cast<int>(rng() % 6);
    const YearMonth first = YearMonth::from_index(config.study_window.first.index() + static_cast<int>(rng() % 24));
    const MonthRange window{first, YearMonth::from_index(first.index() + months - 1)};
    std::string gen_csv = "month,plant_id,state,fuel_raw,net_generation_mwh\n";
    std::string cap_csv = "month,plant_id,state,fuel_raw,capacity_mw\n";
    for (int p = 1; p <= plants; ++p) {
      const char* state = states[rng() % 4];
      for (YearMonth m = window.first; m <= window.last; m = m.next()) {
        if (rng() % 6 == 0) continue;  // plant-month missing entirely
        for (const char* code : codes) {
          if (rng() % 3 == 0) continue;
          const double capacity = mw(rng);
          if (rng() % 8) cap_csv += fmt::format("{},{},{},{},{}\n", m.to_string(), p, state, code, capacity);
          if (rng() % 8) {
            gen_csv += fmt::format("{},{},{},{},{}\n", m.to_string(), p, state, code,
                                   cf(rng) * capacity * hours_in_month(m));
          }
        }
      }
    }
    const auto gen = parse_generation(gen_csv, config);
    const auto cap = parse_capacity(cap_csv, config);
    const auto selection = select_plants(build_profiles(gen.records, cap.records, config), Region::western, config);
    if (selection.empty()) continue;
    std::set<YearMonth> month_set;
    for (YearMonth m = window.first; m <= window.last; m = m.next()) month_set.insert(m);
    for (const std::set<Fuel>& fuels : {std::set<Fuel>{}, std::set<Fuel>{Fuel::coal, Fuel::natural_gas}}) {
      const auto series = compute_rcf(selection, gen.records, cap.records, {Region::western, fuels, window}, config);
      const auto expected = testing::oracle_rcf(oracle_rows(gen.records), oracle_rows(cap.records),
                                                selection.plant_ids, fuels, month_set);
      for (const auto& [m, value] : expected) {
        const auto* point = series.find(m);
        if (value.has_value() != (point != nullptr)) {
          return fail(fmt::format("fleet {} month {}: presence differs from oracle", fleet, m.to_string()));
        }
        if (!value) continue;
        const double rel = std::abs(point->value - *value) / std::max(std::abs(*value), 1e-300);
        worst = std::max(worst, rel);
        if (rel > kOracleRelTol) {
          return fail(fmt::format("fleet {} month {}: {} vs oracle {}", fleet, m.to_string(), point->value, *value));
        }
        ++months_checked;
      }
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto detail = fmt::format("200 fleets, {} month values, worst rel err {:.2e}, {:.2f} s", months_checked,
                                  worst, seconds);
  if (seconds >= kOracleSeconds) return fail(detail + " (too slow)");
  return pass(detail);
}

// C2
Verdict gas_price_table() {
  const auto config = default_config();
  const std::string csv =
      "month,state,price_usd_per_mmbtu\n"
      "2017-01,IL,3.95\n2017-01,MI,3.63\n2017-01,OH,3.84\n2017-01,PA,4.12\n2017-01,NJ,4.06\n2017-01,NY,5.41\n"
      "2017-02,IL,3.56\n2017-02,MI,3.18\n2017-02,OH,3.41\n2017-02,PA,3.21\n2017-02,NJ,3.64\n2017-02,NY,5.48\n"
      "2017-03,IL,4.06\n2017-03,MI,3.16\n2017-03,OH,2.33\n2017-03,PA,2.86\n2017-03,NJ,3.45\n2017-03,NY,2.95\n";
  const auto prices = parse_gas_prices(csv).records;
  const MonthRange q1{{2017, 1}, {2017, 3}};
  // Averages as printed alongside the state prices.
  const double printed[2][3] = {{3.80, 3.38, 3.18}, {4.53, 4.11, 3.08}};
  int loose = 0, tight = 0;
  std::string cells;
  int r = 0;
  for (Region region : {Region::western, Region::mid_atlantic}) {
    const auto series = compute_regional_gas_price(prices, region, q1, config);
    for (int i = 0; i < 3; ++i) {
      const auto* p = series.find(YearMonth::from_index(q1.first.index() + i));
      if (!p) return fail("missing month in regional series");
      const double diff = std::abs(p->value - printed[r][i]);
      loose += diff <= kGasTableLoose;
      tight += diff <= kGasTableTight;
      cells += fmt::format("{}{:.4f}/{:.2f}", cells.empty() ? "" : " ", p->value, printed[r][i]);
    }
    ++r;
  }
  const auto detail = fmt::format("{} within ±{}: {}/6, within ±{}: {}/6 (need {}) [{}]", "computed/printed",
                                  kGasTableLoose, loose, kGasTableTight, tight, kGasTableTightRequired, cells);
  if (loose == 6 && tight >= kGasTableTightRequired) return pass(detail);
  return fail(detail);
}

// C3
Verdict plant_cf() {
  const auto config = default_config();
  const auto gen = parse_generation(
      "month,plant_id,state,fuel_raw,net_generation_mwh\n2015-07,1554,MD,Coal,158687\n2015-08,1554,MD,NG,3343\n", config);
  const auto cap = parse_capacity(
      "month,plant_id,state,fuel_raw,capacity_mw\n"
      "2015-07,1554,MD,Coal,423\n2015-07,1554,MD,NG,126\n2015-08,1554,MD,Coal,423\n2015-08,1554,MD,NG,126\n",
      config);
  SelectionResult sel;
  sel.region = Region::mid_atlantic;
  sel.plant_ids = {1554};
  const auto coal = compute_rcf(sel, gen.records, cap.records, {Region::mid_atlantic, {Fuel::coal}, {{2015, 7}, {2015, 7}}},
                                config);
  const auto ng = compute_rcf(sel, gen.records, cap.records,
                              {Region::mid_atlantic, {Fuel::natural_gas}, {{2015, 8}, {2015, 8}}}, config);
  if (coal.size() != 1 || ng.size() != 1) return fail("expected one month per series");
  const double a = coal.points[0].value, b = ng.points[0].value;
  const auto detail = fmt::format("coal 2015-07 {:.6f} (want 0.5042), NG 2015-08 {:.6f} (want 0.03566)", a, b);
  if (std::abs(a - 0.5042) <= kPlantCfTol && std::abs(b - 0.03566) <= kPlantCfTol) return pass(detail);
  return fail(detail);
}

std::vector<HourlyLoadRecord> load_days(YearMonth m, int days, const std::function<double(int)>& value_at_hour) {
  std::vector<HourlyLoadRecord> out;
  for (int d = 1; d <= days; ++d) {
    for (int h = 0; h < 24; ++h) out.push_back({{m.year, m.month, d}, h, value_at_hour(h)});
  }
  return out;
}

// C4
Verdict peak_load() {
  const auto config = default_config();
  const YearMonth m{2016, 3};
  const MonthRange one{m, m};
  const auto constant = compute_monthly_load(load_days(m, 31, [](int) { return 91234.5; }), one, config);
  if (constant.size() != 1 || constant.points[0].value != 91234.5) return fail("constant load not returned exactly");
  const auto filtered =
      compute_monthly_load(load_days(m, 1, [](int h) { return h >= 7 && h <= 22 ? 100000.0 : 50000.0; }), one, config);
  if (filtered.size() != 1 || filtered.points[0].value != 100000.0) return fail("off-peak rows leaked into the mean");
  const auto late = compute_monthly_load(load_days(m, 31, [](int h) { return h == 23 ? 1e6 : 80000.0; }), one, config);
  if (late.size() != 1 || late.points[0].value != 80000.0) return fail("hour 23 affected the result");
  if (config.peak_hours.count() != 16) return fail("peak window is not 16 hours");
  if (constant.points[0].coverage != 16u * 31u) return fail("coverage is not 16 x days");
  return pass("constant exact, off-peak excluded, hour 23 ignored, 16 peak hours");
}

// C5
Verdict calendar() {
  if (hours_in_month({2016, 2}) != 696) return fail("hours_in_month(2016-02) != 696");
  for (int year = 1800; year <= 2400; ++year) {
    int total = 0;
    for (int month = 1; month <= 12; ++month) total += hours_in_month({year, month});
    if (total != 8760 && total != 8784) return fail(fmt::format("year {} sums to {}", year, total));
  }
  return pass("2016-02 = 696 h; years 1800-2400 sum to 8760 or 8784");
}

// C6
Verdict ols_suite() {
  const auto line = ols_fit(pairs_of({1, 2, 3}, {3, 5, 7}));
  if (std::abs(line.slope - 2) > kExactLineTol || std::abs(line.intercept - 1) > kExactLineTol ||
      std::abs(line.r_squared - 1) > kExactLineTol) {
    return fail("exact line");
  }
  const auto tri = ols_fit(pairs_of({0, 1, 2}, {0, 1, 0}));
  if (std::abs(tri.slope) > kExactLineTol || std::abs(tri.intercept - 1.0 / 3.0) > kExactLineTol ||
      std::abs(tri.r_squared) > kExactLineTol) {
    return fail("zero slope");
  }
  const auto flat = ols_fit(pairs_of({1, 2, 3}, {0.4, 0.4, 0.4}));
  if (flat.slope != 0.0 || flat.r_squared != 1.0) return fail("constant y");

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> load(70000, 130000);
  std::normal_distribution<double> noise(0, 0.05);
  double worst_orth = 0.0, worst_r2 = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng() % 30;
    const double slope = std::uniform_real_distribution<double>(-2e-5, 2e-5)(rng);
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n; ++i) {
      x.push_back(load(rng));
      y.push_back(0.4 + slope * (x.back() - 100000) + noise(rng));
    }
    const auto p = pairs_of(x, y);
    const auto fit = ols_fit(p);
    double s = 0, sx = 0, scale = 0, scale_x = 0;
    for (const auto& q : p.pairs) {
      const double res = q.y - fit.intercept - fit.slope * q.x;
      s += res;
      sx += res * q.x;
      scale += std::abs(q.y);
      scale_x += std::abs(q.y * q.x);
    }
    worst_orth = std::max({worst_orth, std::abs(s) / scale, std::abs(sx) / scale_x});
    const double r = pearson(p);
    worst_r2 = std::max(worst_r2, std::abs(r * r - fit.r_squared));
  }
  const auto detail = fmt::format("worst residual orthogonality {:.2e}, worst |r²-pearson²| {:.2e}", worst_orth, worst_r2);
  if (worst_orth < kOrthogonalityRelTol && worst_r2 <= kRSquaredTol) return pass(detail);
  return fail(detail);
}

// C7
Verdict selection_properties() {
  auto config = default_config();
  const char* states[] = {"IL", "OH", "PA", "MD", "VA", "NY", "KY", "NJ", "MI", "DE"};
  std::mt19937_64 rng(7);
  for (int fleet = 0; fleet < 50; ++fleet) {
    std::vector<GenerationRecord> gen;
    std::vector<CapacityRecord> cap;
    const int plants = 1 + static_cast<int>(rng() % 40);
    for (int p = 1; p <= plants; ++p) {
      const char* state = states[rng() % 10];
      const bool generates = rng() % 5 != 0;
      for (int back = 0; back < 6; ++back) {
        const auto m = YearMonth::from_index(config.study_window.last.index() - back);
        if (rng() % 6 == 0) continue;
        for (Fuel fuel : kAllFuels) {
          if (rng() % 2) continue;
          cap.push_back({m, p, state, fuel, static_cast<double>(rng() % 700)});
          if (generates) gen.push_back({m, p, state, fuel, static_cast<double>(rng() % 200000)});
        }
      }
    }
    const auto profiles = build_profiles(gen, cap, config);
    std::vector<SelectionResult> by_region;
    for (Region r : kAllRegions) by_region.push_back(select_plants(profiles, r, config));
    for (std::size_t i = 0; i < by_region.size(); ++i) {
      for (std::size_t j = i + 1; j < by_region.size(); ++j) {
        for (long id : by_region[i].plant_ids) {
          if (by_region[j].plant_ids.count(id)) return fail(fmt::format("fleet {}: plant {} in two regions", fleet, id));
        }
      }
      double sum = 0;
      for (const auto& [fuel, gw] : by_region[i].total_capacity_by_fuel) sum += gw;
      if (std::abs(sum - by_region[i].total_capacity_gw) > kClosureRelTol * std::max(1.0, sum)) {
        return fail(fmt::format("fleet {}: fuel capacities do not sum to the total", fleet));
      }
    }
    auto raised = config;
    for (double t : {250.0, 350.0, 500.0}) {
      raised.capacity_threshold_mw = t;
      for (Region r : {Region::western, Region::mid_atlantic}) {
        const auto base = select_plants(profiles, r, config);
        const auto higher = select_plants(profiles, r, raised);
        for (long id : higher.plant_ids) {
          if (!base.plant_ids.count(id)) return fail(fmt::format("fleet {}: threshold {} added a plant", fleet, t));
        }
      }
    }
  }
  return pass("50 fleets: monotone in threshold, regions disjoint, fuel capacities close");
}

// C8
Verdict determinism() {
  Scratch scratch("determinism");
  testing::write_fixture(testing::make_synthetic_fixture(), scratch.dir);
  auto manifest = load_manifest(scratch.dir / "manifest.txt");
  std::vector<std::map<std::string, std::string>> runs;
  for (const char* out : {"run_a", "run_b"}) {
    manifest.out_dir = scratch.dir / out;
    const auto report = run_pipeline(manifest);
    if (report.exit_status != 0) return fail("run failed: " + report.diagnostic);
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(manifest.out_dir)) {
      if (e.is_regular_file()) files[fs::relative(e.path(), manifest.out_dir).generic_string()] = slurp(e.path());
    }
    runs.push_back(std::move(files));
  }
  if (runs[0] != runs[1]) return fail("outputs differ between runs");
  return pass(fmt::format("{} files byte-identical across two runs", runs[0].size()));
}

std::string slope_summary(const Findings& findings, const std::string& variant, bool& ok) {
  std::string out;
  int seen = 0;
  for (const auto& s : findings.slopes) {
    if (s.variant != variant) continue;
    if (!s.comparison) {
      ok = false;
      continue;
    }
    const auto want = s.season == Season::winter ? SlopeOrder::first_larger : SlopeOrder::second_larger;
    ok = ok && s.comparison->order == want;
    out += fmt::format("{}{}: {} {}", out.empty() ? "" : "; ", to_string(s.season), to_string(s.first),
                       to_string(s.comparison->order));
    ++seen;
  }
  ok = ok && seen == 2;
  return out;
}

Verdict findings_verdict(const PipelineResult& result) {
  const auto& f = result.findings;
  if (!f.winter_rcf || f.winter_rcf->months == 0) return fail("no winter months with RCF in both regions");
  bool ok = f.winter_rcf->first_higher == f.winter_rcf->months;
  const auto slopes = slope_summary(f, "fossil", ok);
  const auto detail = fmt::format("western winter RCF higher in {}/{} months; fossil slopes [{}]",
                                  f.winter_rcf->first_higher, f.winter_rcf->months, slopes);
  return ok ? pass(detail) : fail(detail);
}

// C9
Verdict synthetic_end_to_end() {
  Scratch scratch("synthetic");
  testing::write_fixture(testing::make_synthetic_fixture(), scratch.dir);
  return findings_verdict(compute_pipeline(load_manifest(scratch.dir / "manifest.txt")));
}

std::optional<PipelineResult> real_data() {
  static std::optional<PipelineResult> cached;
  static bool tried = false;
  if (!tried) {
    tried = true;
    if (const char* dir = std::getenv("RCF_REAL_DATA_DIR"); dir && *dir) {
      cached = compute_pipeline(load_manifest(fs::path(dir) / "manifest.txt"));
    }
  }
  return cached;
}

// C10
Verdict real_selection() {
  const auto result = real_data();
  if (!result) return skip("RCF_REAL_DATA_DIR not set");
  const auto& west = result->regions.at(Region::western).selection;
  const auto& mid = result->regions.at(Region::mid_atlantic).selection;
  auto near = [](double got, double want) { return std::abs(got - want) <= kRealDataRelTol * want; };
  const bool ok = near(static_cast<double>(west.plant_count()), 112) && near(static_cast<double>(mid.plant_count()), 104) &&
                  near(west.total_capacity_gw, 85.49) && near(mid.total_capacity_gw, 68.28);
  const auto detail = fmt::format("western {} plants {:.2f} GW, mid_atlantic {} plants {:.2f} GW", west.plant_count(),
                                  west.total_capacity_gw, mid.plant_count(), mid.total_capacity_gw);
  return ok ? pass(detail) : fail(detail);
}

// C11
Verdict real_findings() {
  const auto result = real_data();
  if (!result) return skip("RCF_REAL_DATA_DIR not set");
  return findings_verdict(*result);
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> expected_failures;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--expect-fail" && i + 1 < argc) {
      expected_failures.insert(argv[++i]);
    } else {
      std::cerr << "usage: rcf_acceptance [--expect-fail ID]...\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"C1 rcf oracle equivalence", oracle_equivalence},
      {"C2 regional gas price table", gas_price_table},
      {"C3 single-plant capacity factor", plant_cf},
      {"C4 peak-hour load", peak_load},
      {"C5 calendar", calendar},
      {"C6 regression suite", ols_suite},
      {"C7 selection properties", selection_properties},
      {"C8 determinism", determinism},
      {"C9 synthetic end-to-end", synthetic_end_to_end},
      {"C10 real-data selection", real_selection},
      {"C11 real-data findings", real_findings},
  };

  std::set<std::string> failed;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = fail(std::string("exception: ") + e.what());
    }
    const char* tag = v.outcome == Outcome::pass ? "PASS" : v.outcome == Outcome::fail ? "FAIL" : "SKIP";
    std::cout << fmt::format("{} {}: {}", tag, name, v.detail) << std::endl;
    if (v.outcome == Outcome::fail) failed.insert(name.substr(0, name.find(' ')));
  }

  if (failed == expected_failures) {
    if (!failed.empty()) {
      std::cout << "failing criteria match the expected set (" << fmt::format("{}", fmt::join(failed, ", ")) << ")\n";
    }
    return 0;
  }
  for (const auto& id : failed) {
    if (!expected_failures.count(id)) std::cout << "unexpected failure: " << id << "\n";
  }
  for (const auto& id : expected_failures) {
    if (!failed.count(id)) std::cout << "expected failure did not occur: " << id << "\n";
  }
  return 1;
}
