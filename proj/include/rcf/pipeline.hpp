#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rcf/analysis.hpp"
#include "rcf/ingest.hpp"
#include "rcf/metrics.hpp"
#include "rcf/regions.hpp"
#include "rcf/selection.hpp"

namespace rcf {

/// Inputs and options for one pipeline run. Paths may be empty when the
/// invoked action does not need that file.
struct PipelineManifest {
  std::filesystem::path generation;
  std::filesystem::path capacity;
  std::filesystem::path gas_prices;
  std::filesystem::path hourly_load;
  std::optional<std::filesystem::path> config;
  std::filesystem::path out_dir = "out";
  /// Replaces the config's study window.
  std::optional<MonthRange> window;
  std::vector<Region> regions = {Region::western, Region::mid_atlantic};
  /// Fuels that get their own RCF series next to the overall and fossil ones.
  std::vector<Fuel> fuels = {Fuel::coal, Fuel::natural_gas};
};

/// `key = value` lines: generation, capacity, gas_prices, hourly_load, config,
/// out, window, regions, fuels. Relative paths resolve against `base_dir`.
PipelineManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir);
PipelineManifest load_manifest(const std::filesystem::path& path);

/// Environment variable naming a config file, used when the manifest has none.
inline constexpr const char* kConfigEnvVar = "RCF_CONFIG";

/// Config from the manifest's file (or $RCF_CONFIG, or the defaults) with the
/// window override applied.
RegionConfig resolve_config(const PipelineManifest& manifest);

struct InputNeeds {
  bool generation = false;
  bool capacity = false;
  bool gas_prices = false;
  bool hourly_load = false;

  static InputNeeds all() { return {true, true, true, true}; }
};

struct IngestedData {
  ParseResult<GenerationRecord> generation;
  ParseResult<CapacityRecord> capacity;
  ParseResult<GasPriceRecord> gas_prices;
  ParseResult<HourlyLoadRecord> hourly_load;
};

/// Checks that every needed path is set and exists before parsing anything.
IngestedData ingest_inputs(const PipelineManifest& manifest, const RegionConfig& config, InputNeeds needs);

/// Which RCF a series measures.
struct RcfVariant {
  std::string name;     // "all", "fossil", or a fuel label
  std::set<Fuel> fuels;  // empty = all fuels
};

std::vector<RcfVariant> rcf_variants(const std::vector<Fuel>& fuels);

struct RegionMetrics {
  SelectionResult selection;
  std::map<std::string, MonthlySeries> rcf;  // keyed by RcfVariant::name
  MonthlySeries gas_price;
};

struct CorrelationFinding {
  Region region = Region::western;
  std::string variant;
  std::optional<double> r;
  std::string error;
};

struct FitFinding {
  Region region = Region::western;
  std::string variant;
  Season season = Season::non_winter;
  AlignedPairs pairs;
  std::optional<RegressionFit> fit;
  std::string error;
};

struct SlopeFinding {
  std::string variant;
  Season season = Season::non_winter;
  Region first = Region::western;
  Region second = Region::mid_atlantic;
  std::optional<SlopeComparison> comparison;
};

/// Winter months where both regions have an overall RCF, and how many of
/// them show `first` above `second`.
struct WinterRcfFinding {
  Region first = Region::western;
  Region second = Region::mid_atlantic;
  std::size_t months = 0;
  std::size_t first_higher = 0;
};

struct Findings {
  std::vector<CorrelationFinding> correlations;
  std::vector<FitFinding> fits;
  std::vector<SlopeFinding> slopes;
  std::optional<WinterRcfFinding> winter_rcf;
};

struct RunWarning {
  std::string source;  // file or stage
  std::string kind;
  std::string message;
};

/// Everything a run computes, held in memory until written.
struct PipelineResult {
  RegionConfig config;
  std::vector<Fuel> fuels;
  std::map<Region, RegionMetrics> regions;
  MonthlySeries load;
  Findings findings;
  std::vector<RunWarning> warnings;
  std::map<std::string, std::size_t> input_rows;  // data rows per input
};

/// ingest -> select -> metrics -> analysis. Throws rcf::Error on anything
/// fatal; writes nothing.
PipelineResult compute_pipeline(const PipelineManifest& manifest);

std::string format_report_text(const PipelineResult& result);
std::string format_report_json(const PipelineResult& result);
std::string format_run_report(const PipelineResult& result);
/// region,variant,season,slope_per_mw,intercept,r_squared,n
std::string format_fits(const PipelineResult& result);
/// region,variant,pearson_r,n
std::string format_correlations(const PipelineResult& result);

/// Series CSVs, selection CSVs, reports and charts, keyed by path relative to
/// the output directory. Rendering happens here so that a chart failure
/// surfaces before any file is written.
std::map<std::string, std::string> render_outputs(const PipelineResult& result);

struct RunReport {
  int exit_status = 0;
  std::string diagnostic;  // set when exit_status != 0
  std::vector<std::filesystem::path> files_written;
  std::size_t warning_count = 0;
};

/// Full run. Fatal errors give a nonzero status and leave the output
/// directory untouched; warnings never change the status.
RunReport run_pipeline(const PipelineManifest& manifest);

/// Writes `files` under `out_dir`, creating directories as needed.
std::vector<std::filesystem::path> write_outputs(const std::filesystem::path& out_dir,
                                                 const std::map<std::string, std::string>& files);

}  // namespace rcf
