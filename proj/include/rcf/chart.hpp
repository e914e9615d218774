#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rcf/analysis.hpp"
#include "rcf/metrics.hpp"

namespace rcf {

enum class ChartKind { dual_axis_time_series, scatter_with_fit };

struct AxisSpec {
  std::string label;
  Unit unit = Unit::dimensionless;
};

struct ScatterPanelSpec {
  std::string title;
  std::vector<std::string> series;  // keys into ChartData::pairs
};

/// What to draw. Series are referenced by key into ChartData.
///
/// Dual-axis time series: `left_series` share the dimensionless left axis,
/// `right_series` share a second unit (MW or USD/MMBtu) on the right axis.
/// Scatter: one panel per entry in `panels`, every series drawn with its own
/// OLS line; `x_axis` and `left_axis` label the axes.
struct ChartSpec {
  ChartKind kind = ChartKind::dual_axis_time_series;
  std::string title;
  AxisSpec left_axis;
  AxisSpec right_axis;
  AxisSpec x_axis;
  std::vector<std::string> left_series;
  std::vector<std::string> right_series;
  std::vector<ScatterPanelSpec> panels;
};

struct ChartData {
  std::map<std::string, MonthlySeries> series;
  std::map<std::string, AlignedPairs> pairs;
};

/// Renders an SVG document. Output depends only on the inputs, so equal
/// inputs give byte-identical files. Throws ChartError for a missing or empty
/// series (naming it) or a spec that breaks the axis conventions.
std::string render_chart(const ChartSpec& spec, const ChartData& data);

void emit_chart(const ChartSpec& spec, const ChartData& data, const std::filesystem::path& path);

}  // namespace rcf
