#include "rcf/chart.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>

#include <fmt/core.h>

#include "rcf/error.hpp"

namespace rcf {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#ff7f0e", "#1f77b4", "#2ca02c", "#d62728",
                                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string axis_title(const AxisSpec& axis) {
  if (axis.unit == Unit::dimensionless) return axis.label;
  return fmt::format("{} ({})", axis.label, to_string(axis.unit));
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

/// Tick positions on 1/2/5 x 10^k steps covering the range. Degenerate
/// ranges are widened first.
struct Ticks {
  double lo = 0.0, hi = 1.0, step = 0.2;
  int decimals = 1;
};

Ticks nice_ticks(Range r) {
  if (r.hi - r.lo <= 0.0) {
    const double pad = r.lo == 0.0 ? 1.0 : std::abs(r.lo) * 0.1;
    r.lo -= pad;
    r.hi += pad;
  }
  const double raw = (r.hi - r.lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  Ticks t;
  t.step = step;
  t.lo = std::floor(r.lo / step) * step;
  t.hi = std::ceil(r.hi / step) * step;
  t.decimals = std::max(0, static_cast<int>(-std::floor(std::log10(step))));
  return t;
}

std::string tick_label(double v, int decimals) {
  auto s = fmt::format("{:.{}f}", v, decimals);
  if (s == "-0" || s.rfind("-0.", 0) == 0) {
    if (std::stod(s) == 0.0) s.erase(0, 1);
  }
  return s;
}

struct Frame {
  double left, top, width, height;
  [[nodiscard]] double right() const { return left + width; }
  [[nodiscard]] double bottom() const { return top + height; }
};

double scale(double v, double lo, double hi, double out_lo, double out_hi) {
  return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
}

class Svg {
 public:
  Svg(double width, double height) {
    out_ = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" viewBox=\"0 0 {0:.0f} "
        "{1:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n"
        "<rect x=\"0\" y=\"0\" width=\"{0:.0f}\" height=\"{1:.0f}\" fill=\"white\"/>\n",
        width, height);
  }

  void line(double x1, double y1, double x2, double y2, std::string_view stroke, double width = 1.0,
            std::string_view dash = {}) {
    out_ += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" stroke-width=\"{}\"",
                        x1, y1, x2, y2, stroke, width);
    if (!dash.empty()) out_ += fmt::format(" stroke-dasharray=\"{}\"", dash);
    out_ += "/>\n";
  }

  void text(double x, double y, std::string_view content, std::string_view anchor = "middle",
            std::optional<double> rotate = std::nullopt, std::string_view extra = {}) {
    out_ += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"{}\"", x, y, anchor);
    if (rotate) out_ += fmt::format(" transform=\"rotate({:.0f} {:.2f} {:.2f})\"", *rotate, x, y);
    if (!extra.empty()) out_ += fmt::format(" {}", extra);
    out_ += fmt::format(">{}</text>\n", escape(content));
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, std::string_view stroke,
                std::string_view dash = {}) {
    if (pts.size() < 2) return;
    out_ += "<polyline fill=\"none\" stroke-width=\"2\" stroke=\"" + std::string(stroke) + "\"";
    if (!dash.empty()) out_ += fmt::format(" stroke-dasharray=\"{}\"", dash);
    out_ += " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      out_ += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", pts[i].first, pts[i].second);
    }
    out_ += "\"/>\n";
  }

  void circle(double x, double y, double r, std::string_view fill) {
    out_ += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{}\" fill=\"{}\"/>\n", x, y, r, fill);
  }

  void rect_outline(const Frame& f) {
    out_ += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"#333333\"/>\n",
        f.left, f.top, f.width, f.height);
  }

  void comment(std::string_view text) { out_ += fmt::format("<!-- {} -->\n", escape(text)); }

  std::string finish() {
    out_ += "</svg>\n";
    return std::move(out_);
  }

 private:
  std::string out_;
};

/// Vertical axis with ticks and gridlines; `on_right` flips tick side.
void draw_value_axis(Svg& svg, const Frame& f, const Ticks& t, bool on_right, const std::string& title,
                     bool grid) {
  const double x = on_right ? f.right() : f.left;
  for (double v = t.lo; v <= t.hi + t.step * 1e-9; v += t.step) {
    const double y = scale(v, t.lo, t.hi, f.bottom(), f.top);
    if (grid) svg.line(f.left, y, f.right(), y, "#e0e0e0");
    svg.line(x, y, on_right ? x + 5 : x - 5, y, "#333333");
    svg.text(on_right ? x + 8 : x - 8, y + 4, tick_label(v, t.decimals), on_right ? "start" : "end");
  }
  const double tx = on_right ? f.right() + 62 : f.left - 62;
  svg.text(tx, f.top + f.height / 2, title, "middle", on_right ? 90.0 : -90.0);
}

const MonthlySeries& lookup_series(const ChartData& data, const std::string& key) {
  auto it = data.series.find(key);
  if (it == data.series.end()) throw ChartError(fmt::format("chart series '{}' not provided", key));
  if (it->second.empty()) throw ChartError(fmt::format("chart series '{}' is empty", key));
  return it->second;
}

const AlignedPairs& lookup_pairs(const ChartData& data, const std::string& key) {
  auto it = data.pairs.find(key);
  if (it == data.pairs.end()) throw ChartError(fmt::format("chart series '{}' not provided", key));
  if (it->second.empty()) throw ChartError(fmt::format("chart series '{}' is empty", key));
  return it->second;
}

std::string render_time_series(const ChartSpec& spec, const ChartData& data) {
  if (spec.left_series.empty() || spec.right_series.empty()) {
    throw ChartError(fmt::format("dual-axis chart '{}' needs series on both axes", spec.title));
  }
  if (spec.left_axis.unit != Unit::dimensionless || spec.right_axis.unit == Unit::dimensionless) {
    throw ChartError(fmt::format("dual-axis chart '{}' must put the dimensionless series left and a physical unit "
                                 "right",
                                 spec.title));
  }

  std::vector<const MonthlySeries*> left, right;
  Range left_range, right_range;
  YearMonth first{9999, 12}, last{0, 1};
  auto collect = [&](const std::vector<std::string>& keys, Unit unit, std::vector<const MonthlySeries*>& out,
                     Range& range) {
    for (const auto& key : keys) {
      const auto& s = lookup_series(data, key);
      if (s.unit != unit) {
        throw ChartError(fmt::format("series '{}' is in {}, axis expects {}", key, to_string(s.unit), to_string(unit)));
      }
      for (const auto& p : s.points) {
        range.add(p.value);
        first = std::min(first, p.month);
        last = std::max(last, p.month);
      }
      out.push_back(&s);
    }
  };
  collect(spec.left_series, spec.left_axis.unit, left, left_range);
  collect(spec.right_series, spec.right_axis.unit, right, right_range);

  const double width = 960, height = 520;
  const Frame f{90, 50, 760, 330};
  Svg svg(width, height);
  svg.comment(spec.title);
  svg.text(width / 2, 28, spec.title, "middle", std::nullopt, "font-size=\"16\"");

  const auto lt = nice_ticks(left_range);
  const auto rt = nice_ticks(right_range);
  draw_value_axis(svg, f, lt, false, axis_title(spec.left_axis), true);
  draw_value_axis(svg, f, rt, true, axis_title(spec.right_axis), false);
  svg.rect_outline(f);

  const int span = last.index() - first.index();
  auto month_x = [&](YearMonth m) {
    if (span == 0) return f.left + f.width / 2;
    return scale(m.index() - first.index(), 0, span, f.left + 10, f.right() - 10);
  };
  const int label_every = std::max(1, (span + 12) / 12);
  for (int i = 0; i <= span; i += label_every) {
    const auto m = YearMonth::from_index(first.index() + i);
    const double x = month_x(m);
    svg.line(x, f.bottom(), x, f.bottom() + 5, "#333333");
    svg.text(x, f.bottom() + 18, m.to_string());
  }
  svg.text(f.left + f.width / 2, f.bottom() + 40, "Month");

  std::size_t color = 0;
  double legend_y = f.bottom() + 62;
  double legend_x = f.left;
  // ~7 px per character at the legend font size
  std::size_t longest = 0;
  for (const auto* s : left) longest = std::max(longest, s->label.size() + 7);
  for (const auto* s : right) longest = std::max(longest, s->label.size() + 8);
  const double column = std::max(230.0, 30.0 + 7.0 * static_cast<double>(longest) + 20.0);
  auto draw = [&](const MonthlySeries& s, const Ticks& t, std::string_view dash, std::string_view side) {
    const char* stroke = kPalette[color++ % kPalette.size()];
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : s.points) pts.emplace_back(month_x(p.month), scale(p.value, t.lo, t.hi, f.bottom(), f.top));
    svg.polyline(pts, stroke, dash);
    for (const auto& [x, y] : pts) svg.circle(x, y, 3, stroke);
    svg.line(legend_x, legend_y - 4, legend_x + 24, legend_y - 4, stroke, 2, dash);
    svg.text(legend_x + 30, legend_y, fmt::format("{} [{}]", s.label, side), "start");
    legend_x += column;
    if (legend_x + column > f.right() + 40) {
      legend_x = f.left;
      legend_y += 18;
    }
  };
  for (const auto* s : left) draw(*s, lt, {}, "left");
  for (const auto* s : right) draw(*s, rt, "6 3", "right");
  return svg.finish();
}

std::string render_scatter(const ChartSpec& spec, const ChartData& data) {
  if (spec.panels.empty()) throw ChartError(fmt::format("scatter chart '{}' has no panels", spec.title));

  Range xr, yr;
  for (const auto& panel : spec.panels) {
    if (panel.series.empty()) throw ChartError(fmt::format("scatter panel '{}' has no series", panel.title));
    for (const auto& key : panel.series) {
      for (const auto& p : lookup_pairs(data, key).pairs) {
        xr.add(p.x);
        yr.add(p.y);
      }
    }
  }
  const auto xt = nice_ticks(xr);
  const auto yt = nice_ticks(yr);

  const double panel_w = 440, gap = 90;
  const double width = 90 + spec.panels.size() * panel_w + (spec.panels.size() - 1) * gap + 40;
  const double height = 540;
  Svg svg(width, height);
  svg.comment(spec.title);
  svg.text(width / 2, 28, spec.title, "middle", std::nullopt, "font-size=\"16\"");

  for (std::size_t pi = 0; pi < spec.panels.size(); ++pi) {
    const auto& panel = spec.panels[pi];
    const Frame f{90 + pi * (panel_w + gap), 60, panel_w, 330};
    svg.text(f.left + f.width / 2, f.top - 10, panel.title, "middle", std::nullopt, "font-weight=\"bold\"");
    draw_value_axis(svg, f, yt, false, axis_title(spec.left_axis), true);
    for (double v = xt.lo; v <= xt.hi + xt.step * 1e-9; v += xt.step) {
      const double x = scale(v, xt.lo, xt.hi, f.left, f.right());
      svg.line(x, f.bottom(), x, f.bottom() + 5, "#333333");
      svg.text(x, f.bottom() + 18, tick_label(v, xt.decimals));
    }
    svg.text(f.left + f.width / 2, f.bottom() + 40, axis_title(spec.x_axis));
    svg.rect_outline(f);

    double legend_y = f.bottom() + 62;
    for (std::size_t si = 0; si < panel.series.size(); ++si) {
      const auto& pairs = lookup_pairs(data, panel.series[si]);
      const char* color = kPalette[si % kPalette.size()];
      auto px = [&](double x) { return scale(x, xt.lo, xt.hi, f.left, f.right()); };
      auto py = [&](double y) { return scale(y, yt.lo, yt.hi, f.bottom(), f.top); };
      Range own;
      for (const auto& p : pairs.pairs) {
        svg.circle(px(p.x), py(p.y), 4, color);
        own.add(p.x);
      }
      std::string legend = pairs.y_label;
      try {
        const auto fit = ols_fit(pairs);
        svg.line(px(own.lo), py(fit.intercept + fit.slope * own.lo), px(own.hi),
                 py(fit.intercept + fit.slope * own.hi), color, 2);
        if (spec.x_axis.unit == Unit::mw) {
          legend += fmt::format(" fit: slope {:.4g}/GW, R2 {:.3f}", fit.slope * 1000.0, fit.r_squared);
        } else {
          legend += fmt::format(" fit: slope {:.4g}, R2 {:.3f}", fit.slope, fit.r_squared);
        }
      } catch (const AnalysisError&) {
        legend += " (fit undefined)";
      }
      svg.circle(f.left + 8, legend_y - 4, 4, color);
      svg.text(f.left + 18, legend_y, legend, "start");
      legend_y += 18;
    }
  }
  return svg.finish();
}

}  // namespace

std::string render_chart(const ChartSpec& spec, const ChartData& data) {
  switch (spec.kind) {
    case ChartKind::dual_axis_time_series:
      return render_time_series(spec, data);
    case ChartKind::scatter_with_fit:
      return render_scatter(spec, data);
  }
  throw ChartError("unknown chart kind");
}

void emit_chart(const ChartSpec& spec, const ChartData& data, const std::filesystem::path& path) {
  auto svg = render_chart(spec, data);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write chart '{}'", path.string()));
  out << svg;
}

}  // namespace rcf
