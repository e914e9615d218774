#include "rcf/pipeline.hpp"

#include <cstdlib>
#include <fstream>

#include <fmt/core.h>

#include "json.hpp"
#include "rcf/chart.hpp"
#include "rcf/error.hpp"
#include "text_util.hpp"

namespace rcf {

namespace fs = std::filesystem;

PipelineManifest parse_manifest(std::string_view text, const fs::path& base_dir) {
  PipelineManifest m;
  auto resolve = [&](std::string_view value) {
    fs::path p{std::string(value)};
    return p.is_absolute() || value.empty() ? p : base_dir / p;
  };
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto line = detail::trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(fmt::format("manifest line {}: expected 'key = value'", line_no));
    auto key = detail::trim(line.substr(0, eq));
    auto value = detail::trim(line.substr(eq + 1));
    if (key == "generation") {
      m.generation = resolve(value);
    } else if (key == "capacity") {
      m.capacity = resolve(value);
    } else if (key == "gas_prices") {
      m.gas_prices = resolve(value);
    } else if (key == "hourly_load") {
      m.hourly_load = resolve(value);
    } else if (key == "config") {
      m.config = resolve(value);
    } else if (key == "out") {
      m.out_dir = resolve(value);
    } else if (key == "window") {
      try {
        m.window = MonthRange::parse(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(fmt::format("manifest window: {}", e.what()));
      }
    } else if (key == "regions") {
      m.regions.clear();
      for (auto item : detail::split(value, ',')) {
        auto r = region_from_string(item);
        if (!r) throw ConfigError(fmt::format("manifest regions: unknown region '{}'", item));
        m.regions.push_back(*r);
      }
    } else if (key == "fuels") {
      m.fuels.clear();
      for (auto item : detail::split(value, ',')) {
        if (item.empty()) continue;
        auto f = fuel_from_string(item);
        if (!f) throw ConfigError(fmt::format("manifest fuels: unknown fuel '{}'", item));
        m.fuels.push_back(*f);
      }
    } else {
      throw ConfigError(fmt::format("manifest line {}: unknown key '{}'", line_no, key));
    }
  }
  return m;
}

PipelineManifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open manifest '{}'", path.string()));
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_manifest(text, path.parent_path());
}

RegionConfig resolve_config(const PipelineManifest& manifest) {
  RegionConfig config = default_config();
  if (manifest.config) {
    config = load_config_file(manifest.config->string());
  } else if (const char* env = std::getenv(kConfigEnvVar); env && *env) {
    config = load_config_file(env);
  }
  if (manifest.window) {
    config.study_window = *manifest.window;
    config.validate();
  }
  return config;
}

IngestedData ingest_inputs(const PipelineManifest& manifest, const RegionConfig& config, InputNeeds needs) {
  const std::pair<bool, const fs::path*> inputs[] = {{needs.generation, &manifest.generation},
                                                     {needs.capacity, &manifest.capacity},
                                                     {needs.gas_prices, &manifest.gas_prices},
                                                     {needs.hourly_load, &manifest.hourly_load}};
  const char* names[] = {"generation", "capacity", "gas_prices", "hourly_load"};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!inputs[i].first) continue;
    const auto& path = *inputs[i].second;
    if (path.empty()) throw Error(fmt::format("no {} input file given", names[i]));
    if (!fs::is_regular_file(path)) throw Error(fmt::format("{} input file not found: {}", names[i], path.string()));
  }
  IngestedData data;
  if (needs.generation) data.generation = parse_generation(read_file(manifest.generation.string()), config);
  if (needs.capacity) data.capacity = parse_capacity(read_file(manifest.capacity.string()), config);
  if (needs.gas_prices) data.gas_prices = parse_gas_prices(read_file(manifest.gas_prices.string()));
  if (needs.hourly_load) data.hourly_load = parse_hourly_load(read_file(manifest.hourly_load.string()));
  return data;
}

std::vector<RcfVariant> rcf_variants(const std::vector<Fuel>& fuels) {
  std::vector<RcfVariant> out = {{"all", {}}, {"fossil", {Fuel::coal, Fuel::natural_gas}}};
  for (Fuel f : fuels) out.push_back({std::string(to_string(f)), {f}});
  return out;
}

namespace {

template <class Record>
void collect_ingest_warnings(std::vector<RunWarning>& out, std::string_view source, const ParseResult<Record>& r) {
  for (const auto& w : r.warnings) {
    out.push_back({std::string(source), std::string(to_string(w.kind)), fmt::format("line {}: {}", w.line, w.message)});
  }
}

void collect_series_warnings(std::vector<RunWarning>& out, const MonthlySeries& s) {
  for (const auto& w : s.warnings) out.push_back({s.label, "series", w});
}

}  // namespace

PipelineResult compute_pipeline(const PipelineManifest& manifest) {
  PipelineResult result;
  result.config = resolve_config(manifest);
  result.fuels = manifest.fuels;
  const auto& config = result.config;
  const auto window = config.study_window;

  auto data = ingest_inputs(manifest, config, InputNeeds::all());
  result.input_rows = {{"generation", data.generation.data_rows},
                       {"capacity", data.capacity.data_rows},
                       {"gas_prices", data.gas_prices.data_rows},
                       {"hourly_load", data.hourly_load.data_rows}};
  collect_ingest_warnings(result.warnings, "generation", data.generation);
  collect_ingest_warnings(result.warnings, "capacity", data.capacity);
  collect_ingest_warnings(result.warnings, "gas_prices", data.gas_prices);
  collect_ingest_warnings(result.warnings, "hourly_load", data.hourly_load);

  const auto profiles = build_profiles(data.generation.records, data.capacity.records, config);
  const auto variants = rcf_variants(manifest.fuels);

  result.load = compute_monthly_load(data.hourly_load.records, window, config);
  collect_series_warnings(result.warnings, result.load);

  for (Region region : manifest.regions) {
    RegionMetrics rm;
    rm.selection = select_plants(profiles, region, config);
    for (const auto& note : rm.selection.notes) {
      result.warnings.push_back({fmt::format("selection_{}", to_string(region)), "selection", note});
    }
    if (rm.selection.empty()) {
      throw DataError(fmt::format("no plants selected for region {}; nothing to analyze", to_string(region)));
    }
    for (const auto& v : variants) {
      auto series = compute_rcf(rm.selection, data.generation.records, data.capacity.records,
                                RcfQuery{region, v.fuels, window}, config);
      collect_series_warnings(result.warnings, series);
      rm.rcf.emplace(v.name, std::move(series));
    }
    rm.gas_price = compute_regional_gas_price(data.gas_prices.records, region, window, config);
    collect_series_warnings(result.warnings, rm.gas_price);
    result.regions.emplace(region, std::move(rm));
  }

  // Analysis: each RCF variant against load, overall and per season.
  auto& findings = result.findings;
  for (Region region : manifest.regions) {
    const auto& rm = result.regions.at(region);
    for (const auto& v : variants) {
      const auto pairs = align(result.load, rm.rcf.at(v.name));
      CorrelationFinding c{region, v.name, std::nullopt, {}};
      try {
        c.r = pearson(pairs);
      } catch (const AnalysisError& e) {
        c.error = e.what();
        result.warnings.push_back({"analysis", "correlation", c.error});
      }
      findings.correlations.push_back(std::move(c));

      auto split = seasonal_split(pairs, config);
      for (Season s : {Season::non_winter, Season::winter}) {
        FitFinding f{region, v.name, s, s == Season::winter ? split.winter : split.non_winter, std::nullopt, {}};
        try {
          f.fit = ols_fit(f.pairs);
        } catch (const AnalysisError& e) {
          f.error = e.what();
          result.warnings.push_back({"analysis", "regression", f.error});
        }
        findings.fits.push_back(std::move(f));
      }
    }
  }

  auto fit_of = [&](Region r, const std::string& variant, Season s) -> const FitFinding* {
    for (const auto& f : findings.fits) {
      if (f.region == r && f.variant == variant && f.season == s) return &f;
    }
    return nullptr;
  };
  const bool have_pair = result.regions.count(Region::western) && result.regions.count(Region::mid_atlantic);
  if (have_pair) {
    for (const auto& v : variants) {
      for (Season s : {Season::non_winter, Season::winter}) {
        SlopeFinding sf{v.name, s, Region::western, Region::mid_atlantic, std::nullopt};
        const auto* a = fit_of(Region::western, v.name, s);
        const auto* b = fit_of(Region::mid_atlantic, v.name, s);
        if (a && b && a->fit && b->fit) sf.comparison = compare_slopes(*a->fit, *b->fit);
        findings.slopes.push_back(sf);
      }
    }
    WinterRcfFinding w;
    const auto& west = result.regions.at(Region::western).rcf.at("all");
    const auto& mid = result.regions.at(Region::mid_atlantic).rcf.at("all");
    for (const auto& p : align(west, mid).pairs) {
      if (season_of(p.month, config) != Season::winter) continue;
      ++w.months;
      if (p.x > p.y) ++w.first_higher;
    }
    findings.winter_rcf = w;
  }
  return result;
}

namespace {

std::string per_gw(double slope_per_mw) { return fmt::format("{:.4f}", slope_per_mw * 1000.0); }

const char* comparison_text(const SlopeFinding& s) {
  if (!s.comparison) return "n/a";
  switch (s.comparison->order) {
    case SlopeOrder::first_larger:
      return "first";
    case SlopeOrder::second_larger:
      return "second";
    case SlopeOrder::equal:
      return "equal";
  }
  return "n/a";
}

}  // namespace

std::string format_report_text(const PipelineResult& result) {
  const auto& config = result.config;
  std::string out = "Regional capacity factor analysis\n";
  out += fmt::format("Study window: {}\n", config.study_window.to_string());
  out += fmt::format("Peak hours: {:02d}:00-{:02d}:00 ({} per day)\n\n", config.peak_hours.first,
                     config.peak_hours.last + 1, config.peak_hours.count());

  out += "Selected plants (capacity at reference month, GW)\n";
  for (const auto& [region, rm] : result.regions) {
    const auto& s = rm.selection;
    out += fmt::format("  {:<13} {:>4} plants  total {:8.2f}", to_string(region), s.plant_count(),
                       s.total_capacity_gw);
    for (const auto& [fuel, gw] : s.total_capacity_by_fuel) out += fmt::format("  {} {:.2f}", to_string(fuel), gw);
    out += fmt::format("  ({})\n", s.reference_month.to_string());
  }

  out += "\nMonthly series (RCF 4 dp, load MW, gas USD/MMBtu)\n";
  std::string header = fmt::format("  {:<8}", "month");
  for (const auto& [region, rm] : result.regions) header += fmt::format(" {:>14}", fmt::format("rcf_{}", to_string(region)));
  header += fmt::format(" {:>10}", "load_mw");
  for (const auto& [region, rm] : result.regions) header += fmt::format(" {:>14}", fmt::format("gas_{}", to_string(region)));
  out += header + "\n";
  for (YearMonth m = config.study_window.first; m <= config.study_window.last; m = m.next()) {
    std::string row = fmt::format("  {:<8}", m.to_string());
    for (const auto& [region, rm] : result.regions) {
      const auto* p = rm.rcf.at("all").find(m);
      row += p ? fmt::format(" {:>14.4f}", p->value) : fmt::format(" {:>14}", "-");
    }
    const auto* lp = result.load.find(m);
    row += lp ? fmt::format(" {:>10.0f}", lp->value) : fmt::format(" {:>10}", "-");
    for (const auto& [region, rm] : result.regions) {
      const auto* p = rm.gas_price.find(m);
      row += p ? fmt::format(" {:>14.2f}", p->value) : fmt::format(" {:>14}", "-");
    }
    out += row + "\n";
  }

  out += "\nCorrelation of RCF with peak-hour system load (Pearson r)\n";
  for (const auto& c : result.findings.correlations) {
    out += fmt::format("  {:<13} {:<12} {}\n", to_string(c.region), c.variant,
                       c.r ? fmt::format("{:.4f}", *c.r) : "undefined: " + c.error);
  }

  out += "\nOLS of RCF on system load (slope per GW)\n";
  for (const auto& f : result.findings.fits) {
    out += fmt::format("  {:<13} {:<12} {:<11} ", to_string(f.region), f.variant, to_string(f.season));
    if (f.fit) {
      out += fmt::format("slope {:>8}  intercept {:.4f}  R2 {:.4f}  n {}\n", per_gw(f.fit->slope),
                         f.fit->intercept, f.fit->r_squared, f.fit->n);
    } else {
      out += "undefined: " + f.error + "\n";
    }
  }

  if (!result.findings.slopes.empty()) {
    out += "\nSlope comparison (western vs mid_atlantic)\n";
    for (const auto& s : result.findings.slopes) {
      out += fmt::format("  {:<12} {:<11} ", s.variant, to_string(s.season));
      if (!s.comparison) {
        out += "n/a\n";
      } else if (s.comparison->order == SlopeOrder::equal) {
        out += "equal\n";
      } else {
        const Region larger = s.comparison->order == SlopeOrder::first_larger ? s.first : s.second;
        out += fmt::format("{} larger by {} per GW\n", to_string(larger), per_gw(s.comparison->difference));
      }
    }
  }
  if (const auto& w = result.findings.winter_rcf) {
    out += fmt::format("\nWinter months with {} RCF above {}: {} of {}\n", to_string(w->first), to_string(w->second),
                       w->first_higher, w->months);
  }
  return out;
}

std::string format_report_json(const PipelineResult& result) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["study_window"] = {{"first", result.config.study_window.first.to_string()},
                       {"last", result.config.study_window.last.to_string()}};
  j["peak_hours"] = {{"first", result.config.peak_hours.first}, {"last", result.config.peak_hours.last}};

  auto series_json = [](const MonthlySeries& s) {
    ordered_json points = ordered_json::array();
    for (const auto& p : s.points) {
      points.push_back({{"month", p.month.to_string()}, {"value", p.value}, {"coverage", p.coverage},
                        {"warnings", p.warnings}});
    }
    return ordered_json{{"label", s.label}, {"unit", std::string(to_string(s.unit))}, {"points", points}};
  };

  ordered_json regions = ordered_json::object();
  for (const auto& [region, rm] : result.regions) {
    ordered_json sel;
    sel["plant_count"] = rm.selection.plant_count();
    sel["reference_month"] = rm.selection.reference_month.to_string();
    sel["total_capacity_gw"] = rm.selection.total_capacity_gw;
    ordered_json by_fuel = ordered_json::object();
    for (const auto& [fuel, gw] : rm.selection.total_capacity_by_fuel) by_fuel[std::string(to_string(fuel))] = gw;
    sel["capacity_gw_by_fuel"] = by_fuel;
    sel["plant_ids"] = rm.selection.plant_ids;
    ordered_json rcf = ordered_json::object();
    for (const auto& v : rcf_variants(result.fuels)) rcf[v.name] = series_json(rm.rcf.at(v.name));
    regions[std::string(to_string(region))] = {{"selection", sel}, {"rcf", rcf}, {"gas_price", series_json(rm.gas_price)}};
  }
  j["regions"] = regions;
  j["system_load"] = series_json(result.load);

  ordered_json corr = ordered_json::array();
  for (const auto& c : result.findings.correlations) {
    ordered_json e{{"region", std::string(to_string(c.region))}, {"variant", c.variant}};
    e["pearson_r"] = c.r ? ordered_json(*c.r) : ordered_json(nullptr);
    if (!c.error.empty()) e["error"] = c.error;
    corr.push_back(e);
  }
  j["correlations"] = corr;

  ordered_json fits = ordered_json::array();
  for (const auto& f : result.findings.fits) {
    ordered_json e{{"region", std::string(to_string(f.region))},
                   {"variant", f.variant},
                   {"season", std::string(to_string(f.season))},
                   {"n", f.pairs.size()}};
    if (f.fit) {
      e["slope_per_mw"] = f.fit->slope;
      e["slope_per_gw"] = f.fit->slope * 1000.0;
      e["intercept"] = f.fit->intercept;
      e["r_squared"] = f.fit->r_squared;
    } else {
      e["error"] = f.error;
    }
    fits.push_back(e);
  }
  j["fits"] = fits;

  ordered_json slopes = ordered_json::array();
  for (const auto& s : result.findings.slopes) {
    ordered_json e{{"variant", s.variant},
                   {"season", std::string(to_string(s.season))},
                   {"first", std::string(to_string(s.first))},
                   {"second", std::string(to_string(s.second))},
                   {"larger", comparison_text(s)}};
    if (s.comparison) e["difference_per_mw"] = s.comparison->difference;
    slopes.push_back(e);
  }
  j["slope_comparisons"] = slopes;
  if (const auto& w = result.findings.winter_rcf) {
    j["winter_rcf"] = {{"first", std::string(to_string(w->first))},
                       {"second", std::string(to_string(w->second))},
                       {"months", w->months},
                       {"first_higher", w->first_higher}};
  }
  return j.dump(2) + "\n";
}

std::string format_run_report(const PipelineResult& result) {
  std::string out = "Run report\n\nInput data rows\n";
  for (const auto& [name, rows] : result.input_rows) out += fmt::format("  {:<12} {}\n", name, rows);

  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  for (const auto& w : result.warnings) ++counts[{w.source, w.kind}];
  out += fmt::format("\nWarnings: {}\n", result.warnings.size());
  for (const auto& [key, n] : counts) out += fmt::format("  {:<28} {:<15} {}\n", key.first, key.second, n);
  if (!result.warnings.empty()) {
    out += "\nDetails\n";
    for (const auto& w : result.warnings) out += fmt::format("  [{}] {}: {}\n", w.source, w.kind, w.message);
  }
  return out;
}

std::string format_fits(const PipelineResult& result) {
  std::string out = "region,variant,season,slope_per_mw,intercept,r_squared,n\n";
  for (const auto& f : result.findings.fits) {
    if (!f.fit) {
      out += fmt::format("{},{},{},,,,{}\n", to_string(f.region), f.variant, to_string(f.season), f.pairs.size());
      continue;
    }
    out += fmt::format("{},{},{},{},{},{},{}\n", to_string(f.region), f.variant, to_string(f.season), f.fit->slope,
                       f.fit->intercept, f.fit->r_squared, f.fit->n);
  }
  return out;
}

std::string format_correlations(const PipelineResult& result) {
  std::string out = "region,variant,pearson_r,n\n";
  for (const auto& c : result.findings.correlations) {
    const auto& rm = result.regions.at(c.region);
    const auto n = align(result.load, rm.rcf.at(c.variant)).size();
    out += fmt::format("{},{},{},{}\n", to_string(c.region), c.variant, c.r ? fmt::format("{}", *c.r) : "", n);
  }
  return out;
}

namespace {

std::string pairs_key(Region r, Season s) { return fmt::format("{} {}", to_string(r), to_string(s)); }

}  // namespace

std::map<std::string, std::string> render_outputs(const PipelineResult& result) {
  std::map<std::string, std::string> files;
  ChartData data;
  std::vector<std::string> overall, per_fuel, prices;

  files["series/system_load.csv"] = format_series(result.load);
  data.series[result.load.label] = result.load;
  std::vector<SelectionResult> selections;
  for (const auto& [region, rm] : result.regions) {
    selections.push_back(rm.selection);
    files[fmt::format("selection/plants_{}.csv", to_string(region))] = format_selected_plants(rm.selection);
    for (const auto& [variant, series] : rm.rcf) {
      files[fmt::format("series/{}.csv", series.label)] = format_series(series);
      data.series[series.label] = series;
      if (series.empty()) continue;
      if (variant == "all") {
        overall.push_back(series.label);
      } else if (variant != "fossil") {
        per_fuel.push_back(series.label);
      }
    }
    files[fmt::format("series/{}.csv", rm.gas_price.label)] = format_series(rm.gas_price);
    data.series[rm.gas_price.label] = rm.gas_price;
    if (!rm.gas_price.empty()) prices.push_back(rm.gas_price.label);
  }
  files["selection/capacity_by_fuel.csv"] = format_capacity_by_fuel(selections);
  files["series/fits.csv"] = format_fits(result);
  files["series/correlations.csv"] = format_correlations(result);

  const std::vector<std::string> load_keys =
      result.load.empty() ? std::vector<std::string>{} : std::vector<std::string>{result.load.label};
  const AxisSpec rcf_axis{"Regional capacity factor", Unit::dimensionless};
  const AxisSpec load_axis{"System load", Unit::mw};
  const AxisSpec price_axis{"Natural gas price", Unit::usd_per_mmbtu};

  ChartSpec rcf_load{ChartKind::dual_axis_time_series, "Regional capacity factors and system load",
                     rcf_axis, load_axis, {}, overall, load_keys, {}};
  ChartSpec rcf_price{ChartKind::dual_axis_time_series, "Regional capacity factors and regional gas prices",
                      rcf_axis, price_axis, {}, overall, prices, {}};
  ChartSpec fuel_price{ChartKind::dual_axis_time_series, "Coal and gas regional capacity factors and gas prices",
                       rcf_axis, price_axis, {}, per_fuel, prices, {}};

  ChartSpec scatter{ChartKind::scatter_with_fit, "Fossil regional capacity factors versus system load",
                    rcf_axis, {}, load_axis, {}, {}, {}};
  for (Season s : {Season::non_winter, Season::winter}) {
    ScatterPanelSpec panel{s == Season::winter ? "Winter months" : "Non-winter months", {}};
    for (const auto& f : result.findings.fits) {
      if (f.variant != "fossil" || f.season != s || f.pairs.empty()) continue;
      auto key = pairs_key(f.region, s);
      auto pairs = f.pairs;
      pairs.y_label = fmt::format("{}", to_string(f.region));
      data.pairs[key] = std::move(pairs);
      panel.series.push_back(key);
    }
    if (!panel.series.empty()) scatter.panels.push_back(std::move(panel));
  }

  files["charts/rcf_load.svg"] = render_chart(rcf_load, data);
  files["charts/rcf_gas_price.svg"] = render_chart(rcf_price, data);
  files["charts/fuel_rcf_gas_price.svg"] = render_chart(fuel_price, data);
  files["charts/rcf_load_scatter.svg"] = render_chart(scatter, data);

  files["report.txt"] = format_report_text(result);
  files["report.json"] = format_report_json(result);
  files["run_report.txt"] = format_run_report(result);
  return files;
}

std::vector<fs::path> write_outputs(const fs::path& out_dir, const std::map<std::string, std::string>& files) {
  std::vector<fs::path> written;
  for (const auto& [rel, content] : files) {
    const auto path = out_dir / rel;
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error(fmt::format("cannot create directory '{}': {}", path.parent_path().string(), ec.message()));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    out << content;
    written.push_back(path);
  }
  return written;
}

RunReport run_pipeline(const PipelineManifest& manifest) {
  RunReport report;
  try {
    const auto result = compute_pipeline(manifest);
    const auto files = render_outputs(result);
    report.files_written = write_outputs(manifest.out_dir, files);
    report.warning_count = result.warnings.size();
  } catch (const Error& e) {
    report.exit_status = 1;
    report.diagnostic = e.what();
  }
  return report;
}

}  // namespace rcf
