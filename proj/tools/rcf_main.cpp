// rcf: command-line front end for the regional capacity factor pipeline.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "rcf/error.hpp"
#include "rcf/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string manifest;
  std::string config;
  std::string window;
  std::string out;
  std::string generation, capacity, gas_prices, hourly_load;
  std::vector<std::string> regions;
  std::vector<std::string> fuels;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--manifest", o.manifest, "Manifest file (key = value)");
  cmd->add_option("--config", o.config, "Configuration file overriding the defaults");
  cmd->add_option("--window", o.window, "Study window, YYYY-MM..YYYY-MM");
  cmd->add_option("--out", o.out, "Output directory");
}

void add_inputs(CLI::App* cmd, Options& o) {
  cmd->add_option("--generation", o.generation, "Canonical generation CSV");
  cmd->add_option("--capacity", o.capacity, "Canonical capacity CSV");
  cmd->add_option("--gas-prices", o.gas_prices, "Canonical gas price CSV");
  cmd->add_option("--load", o.hourly_load, "Canonical hourly load CSV");
}

rcf::PipelineManifest build_manifest(const Options& o) {
  rcf::PipelineManifest m;
  if (!o.manifest.empty()) m = rcf::load_manifest(o.manifest);
  if (!o.config.empty()) m.config = fs::path(o.config);
  if (!o.window.empty()) {
    try {
      m.window = rcf::MonthRange::parse(o.window);
    } catch (const std::invalid_argument& e) {
      throw rcf::ConfigError(fmt::format("--window: {}", e.what()));
    }
  }
  if (!o.out.empty()) m.out_dir = o.out;
  if (!o.generation.empty()) m.generation = o.generation;
  if (!o.capacity.empty()) m.capacity = o.capacity;
  if (!o.gas_prices.empty()) m.gas_prices = o.gas_prices;
  if (!o.hourly_load.empty()) m.hourly_load = o.hourly_load;
  if (!o.regions.empty()) {
    m.regions.clear();
    for (const auto& r : o.regions) {
      auto region = rcf::region_from_string(r);
      if (!region) throw rcf::ConfigError(fmt::format("unknown region '{}'", r));
      m.regions.push_back(*region);
    }
  }
  if (!o.fuels.empty()) {
    m.fuels.clear();
    for (const auto& f : o.fuels) {
      auto fuel = rcf::fuel_from_string(f);
      if (!fuel) throw rcf::ConfigError(fmt::format("unknown fuel '{}'", f));
      m.fuels.push_back(*fuel);
    }
  }
  return m;
}

template <class Record>
void print_ingest_summary(std::string_view name, const rcf::ParseResult<Record>& r) {
  fmt::print("{:<12} rows {:>8}  accepted {:>8}  records {:>8}  warnings {}\n", name, r.data_rows, r.accepted_rows,
             r.records.size(), r.warnings.size());
  for (const auto& w : r.warnings) fmt::print("  line {}: [{}] {}\n", w.line, rcf::to_string(w.kind), w.message);
}

void print_series_warnings(const rcf::MonthlySeries& s) {
  for (const auto& w : s.warnings) fmt::print(stderr, "warning: {}\n", w);
}

void write_and_list(const fs::path& out, const std::map<std::string, std::string>& files) {
  for (const auto& p : rcf::write_outputs(out, files)) fmt::print("wrote {}\n", p.string());
}

int cmd_config_show(const Options& o) {
  fmt::print("{}", rcf::format_config(rcf::resolve_config(build_manifest(o))));
  return 0;
}

int cmd_ingest(const Options& o) {
  auto m = build_manifest(o);
  auto config = rcf::resolve_config(m);
  rcf::InputNeeds needs{!m.generation.empty(), !m.capacity.empty(), !m.gas_prices.empty(), !m.hourly_load.empty()};
  if (!needs.generation && !needs.capacity && !needs.gas_prices && !needs.hourly_load) {
    throw rcf::Error("ingest: no input files given");
  }
  auto data = rcf::ingest_inputs(m, config, needs);
  std::map<std::string, std::string> files;
  if (needs.generation) {
    print_ingest_summary("generation", data.generation);
    files["ingest/generation.csv"] = rcf::format_generation(data.generation.records);
  }
  if (needs.capacity) {
    print_ingest_summary("capacity", data.capacity);
    files["ingest/capacity.csv"] = rcf::format_capacity(data.capacity.records);
  }
  if (needs.gas_prices) {
    print_ingest_summary("gas_prices", data.gas_prices);
    files["ingest/gas_prices.csv"] = rcf::format_gas_prices(data.gas_prices.records);
  }
  if (needs.hourly_load) {
    print_ingest_summary("hourly_load", data.hourly_load);
    files["ingest/hourly_load.csv"] = rcf::format_hourly_load(data.hourly_load.records);
  }
  write_and_list(m.out_dir, files);
  return 0;
}

std::vector<rcf::SelectionResult> select_regions(const rcf::PipelineManifest& m, const rcf::RegionConfig& config,
                                                 const rcf::IngestedData& data) {
  auto profiles = rcf::build_profiles(data.generation.records, data.capacity.records, config);
  std::vector<rcf::SelectionResult> out;
  for (auto region : m.regions) {
    out.push_back(rcf::select_plants(profiles, region, config));
    for (const auto& note : out.back().notes) fmt::print(stderr, "note: {}\n", note);
  }
  return out;
}

int cmd_select(const Options& o) {
  auto m = build_manifest(o);
  auto config = rcf::resolve_config(m);
  auto data = rcf::ingest_inputs(m, config, {true, true, false, false});
  auto selections = select_regions(m, config, data);
  std::map<std::string, std::string> files;
  for (const auto& s : selections) {
    fmt::print("{:<13} {:>4} plants  {:.2f} GW at {}\n", rcf::to_string(s.region), s.plant_count(),
               s.total_capacity_gw, s.reference_month.to_string());
    files[fmt::format("selection/plants_{}.csv", rcf::to_string(s.region))] = rcf::format_selected_plants(s);
  }
  files["selection/capacity_by_fuel.csv"] = rcf::format_capacity_by_fuel(selections);
  write_and_list(m.out_dir, files);
  return 0;
}

int cmd_rcf(const Options& o) {
  auto m = build_manifest(o);
  auto config = rcf::resolve_config(m);
  auto data = rcf::ingest_inputs(m, config, {true, true, false, false});
  auto selections = select_regions(m, config, data);
  std::set<rcf::Fuel> fuels(m.fuels.begin(), m.fuels.end());
  if (o.fuels.empty()) fuels.clear();
  std::map<std::string, std::string> files;
  for (const auto& s : selections) {
    auto series = rcf::compute_rcf(s, data.generation.records, data.capacity.records,
                                   rcf::RcfQuery{s.region, fuels, config.study_window}, config);
    print_series_warnings(series);
    files[fmt::format("series/{}.csv", series.label)] = rcf::format_series(series);
  }
  write_and_list(m.out_dir, files);
  return 0;
}

int cmd_load(const Options& o) {
  auto m = build_manifest(o);
  auto config = rcf::resolve_config(m);
  auto data = rcf::ingest_inputs(m, config, {false, false, false, true});
  auto series = rcf::compute_monthly_load(data.hourly_load.records, config.study_window, config);
  print_series_warnings(series);
  write_and_list(m.out_dir, {{"series/system_load.csv", rcf::format_series(series)}});
  return 0;
}

int cmd_gasprice(const Options& o) {
  auto m = build_manifest(o);
  auto config = rcf::resolve_config(m);
  auto data = rcf::ingest_inputs(m, config, {false, false, true, false});
  std::map<std::string, std::string> files;
  for (auto region : m.regions) {
    auto series = rcf::compute_regional_gas_price(data.gas_prices.records, region, config.study_window, config);
    print_series_warnings(series);
    files[fmt::format("series/{}.csv", series.label)] = rcf::format_series(series);
  }
  write_and_list(m.out_dir, files);
  return 0;
}

int cmd_analyze(const Options& o) {
  auto m = build_manifest(o);
  auto result = rcf::compute_pipeline(m);
  const auto text = rcf::format_report_text(result);
  write_and_list(m.out_dir, {{"report.txt", text},
                             {"report.json", rcf::format_report_json(result)},
                             {"series/fits.csv", rcf::format_fits(result)},
                             {"series/correlations.csv", rcf::format_correlations(result)}});
  if (!o.quiet) fmt::print("\n{}", text);
  return 0;
}

int cmd_run(const Options& o) {
  auto m = build_manifest(o);
  auto report = rcf::run_pipeline(m);
  if (report.exit_status != 0) {
    fmt::print(stderr, "error: {}\n", report.diagnostic);
    return report.exit_status;
  }
  fmt::print("wrote {} files to {} ({} warnings, see run_report.txt)\n", report.files_written.size(),
             m.out_dir.string(), report.warning_count);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regional capacity factor analysis for power market data"};
  app.require_subcommand(1);
  Options o;

  auto* config_cmd = app.add_subcommand("config", "Configuration actions");
  auto* show = config_cmd->add_subcommand("show", "Print the effective configuration");
  config_cmd->require_subcommand(1);
  add_common(show, o);

  struct Verb {
    const char* name;
    const char* help;
    int (*fn)(const Options&);
    bool regions;
    bool fuels;
  };
  const Verb verbs[] = {
      {"ingest", "Parse and validate input files, write normalized copies", cmd_ingest, false, false},
      {"select", "Select plants per region and summarize capacity by fuel", cmd_select, true, false},
      {"rcf", "Monthly regional capacity factor series", cmd_rcf, true, true},
      {"load", "Monthly peak-hour system load series", cmd_load, false, false},
      {"gasprice", "Monthly regional gas price series", cmd_gasprice, true, false},
      {"analyze", "Correlation and seasonal regression findings", cmd_analyze, true, true},
      {"run", "Full pipeline: series, selection, findings and charts", cmd_run, true, true},
  };
  std::vector<std::pair<CLI::App*, int (*)(const Options&)>> commands;
  for (const auto& v : verbs) {
    auto* cmd = app.add_subcommand(v.name, v.help);
    add_common(cmd, o);
    add_inputs(cmd, o);
    if (v.regions) cmd->add_option("--region", o.regions, "Region(s) to process");
    if (v.fuels) cmd->add_option("--fuel", o.fuels, "Fuel filter / per-fuel series");
    if (std::string(v.name) == "analyze") cmd->add_flag("--quiet", o.quiet, "Do not echo the report");
    commands.emplace_back(cmd, v.fn);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*show) return cmd_config_show(o);
    for (const auto& [cmd, fn] : commands) {
      if (*cmd) return fn(o);
    }
  } catch (const rcf::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 1;
}
