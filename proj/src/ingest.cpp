#include "rcf/ingest.hpp"

#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <fmt/core.h>

#include "rcf/error.hpp"
#include "text_util.hpp"

namespace rcf {

std::string_view to_string(IngestWarning::Kind kind) {
  switch (kind) {
    case IngestWarning::Kind::malformed_row:
      return "malformed_row";
    case IngestWarning::Kind::invalid_value:
      return "invalid_value";
    case IngestWarning::Kind::unknown_state:
      return "unknown_state";
    case IngestWarning::Kind::out_of_window:
      return "out_of_window";
  }
  return "malformed_row";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open input file '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

using Kind = IngestWarning::Kind;

/// Splits one CSV line. Double-quoted fields may contain commas; `""` is an
/// escaped quote. Fields are trimmed.
std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back(detail::trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.emplace_back(detail::trim(field));
  return out;
}

/// Walks a canonical table: locates the required columns in the header and
/// hands each data row to `on_row` as fields in `columns` order.
template <std::size_t N, class OnRow>
void scan_table(std::string_view content, std::string_view table, const std::array<std::string_view, N>& columns,
                OnRow&& on_row) {
  std::array<std::size_t, N> index{};
  std::size_t width = 0;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    auto raw = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? content.size() : nl + 1;
    ++line_no;
    auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;

    auto fields = split_csv(line);
    if (!have_header) {
      if (line_no == 1 && !fields.empty() && fields[0].rfind("\xEF\xBB\xBF", 0) == 0) fields[0].erase(0, 3);
      for (std::size_t c = 0; c < N; ++c) {
        std::size_t found = fields.size();
        for (std::size_t f = 0; f < fields.size(); ++f) {
          if (detail::to_lower(fields[f]) == columns[c]) found = f;
        }
        if (found == fields.size()) {
          throw SchemaError(fmt::format("{}: header is missing column '{}'", table, columns[c]));
        }
        index[c] = found;
      }
      width = fields.size();
      have_header = true;
      continue;
    }

    std::array<std::string_view, N> row{};
    if (fields.size() != width) {
      on_row(line_no, row, fmt::format("expected {} fields, found {}", width, fields.size()));
      continue;
    }
    for (std::size_t c = 0; c < N; ++c) row[c] = fields[index[c]];
    on_row(line_no, row, std::string{});
  }
  if (!have_header) throw SchemaError(fmt::format("{}: file is empty (no header row)", table));
}

template <class Result>
void warn(Result& result, std::size_t line, Kind kind, std::string message) {
  result.warnings.push_back({line, kind, std::move(message)});
}

/// Fields common to the two plant tables. Returns false (after warning) when
/// the row must be skipped.
template <class Result>
bool parse_plant_key(Result& result, std::size_t line, std::string_view month_text, std::string_view id_text,
                     std::string_view state_text, const RegionConfig& config, YearMonth& month, long& plant_id,
                     std::string& state) {
  try {
    month = YearMonth::parse(month_text);
  } catch (const std::invalid_argument& e) {
    warn(result, line, Kind::invalid_value, e.what());
    return false;
  }
  auto id = detail::parse_long(id_text);
  if (!id || *id <= 0) {
    warn(result, line, Kind::invalid_value, fmt::format("plant_id '{}' is not a positive integer", id_text));
    return false;
  }
  plant_id = *id;
  state = detail::to_upper(state_text);
  if (!is_us_state_code(state)) {
    warn(result, line, Kind::unknown_state, fmt::format("unrecognized state code '{}'", state_text));
    return false;
  }
  if (!config.study_window.contains(month)) {
    warn(result, line, Kind::out_of_window,
         fmt::format("month {} outside study window {}", month.to_string(), config.study_window.to_string()));
    return false;
  }
  return true;
}

using PlantKey = std::tuple<YearMonth, long, Fuel>;

template <class Record, class Value>
ParseResult<Record> parse_plant_table(std::string_view content, const RegionConfig& config, std::string_view table,
                                      std::string_view value_column, Value Record::*value_member,
                                      bool allow_negative) {
  ParseResult<Record> result;
  std::map<PlantKey, Record> merged;
  const std::array<std::string_view, 5> columns = {"month", "plant_id", "state", "fuel_raw", value_column};
  scan_table(content, table, columns, [&](std::size_t line, const auto& row, const std::string& problem) {
    ++result.data_rows;
    if (!problem.empty()) {
      warn(result, line, Kind::malformed_row, problem);
      return;
    }
    Record rec;
    if (!parse_plant_key(result, line, row[0], row[1], row[2], config, rec.month, rec.plant_id, rec.state)) return;
    rec.fuel = config.normalize_fuel(row[3]);
    auto value = detail::parse_double(row[4]);
    if (!value) {
      warn(result, line, Kind::invalid_value, fmt::format("{} '{}' is not a number", value_column, row[4]));
      return;
    }
    if (!allow_negative && *value < 0.0) {
      warn(result, line, Kind::invalid_value, fmt::format("{} {} is negative", value_column, row[4]));
      return;
    }
    rec.*value_member = *value;
    PlantKey key{rec.month, rec.plant_id, rec.fuel};
    auto [it, inserted] = merged.try_emplace(key, rec);
    if (!inserted) {
      if (it->second.state != rec.state) {
        throw DataError(fmt::format("{} line {}: plant {} reported in both {} and {}", table, line, rec.plant_id,
                                    it->second.state, rec.state));
      }
      it->second.*value_member += *value;
    }
    ++result.accepted_rows;
  });
  result.records.reserve(merged.size());
  for (auto& [key, rec] : merged) result.records.push_back(std::move(rec));
  return result;
}

}  // namespace

ParseResult<GenerationRecord> parse_generation(std::string_view content, const RegionConfig& config) {
  return parse_plant_table(content, config, "generation", "net_generation_mwh", &GenerationRecord::net_generation_mwh,
                           true);
}

ParseResult<CapacityRecord> parse_capacity(std::string_view content, const RegionConfig& config) {
  return parse_plant_table(content, config, "capacity", "capacity_mw", &CapacityRecord::capacity_mw, false);
}

ParseResult<GasPriceRecord> parse_gas_prices(std::string_view content) {
  ParseResult<GasPriceRecord> result;
  std::map<std::pair<YearMonth, std::string>, GasPriceRecord> by_key;
  const std::array<std::string_view, 3> columns = {"month", "state", "price_usd_per_mmbtu"};
  scan_table(content, "gas_prices", columns, [&](std::size_t line, const auto& row, const std::string& problem) {
    ++result.data_rows;
    if (!problem.empty()) {
      warn(result, line, Kind::malformed_row, problem);
      return;
    }
    GasPriceRecord rec;
    try {
      rec.month = YearMonth::parse(row[0]);
    } catch (const std::invalid_argument& e) {
      warn(result, line, Kind::invalid_value, e.what());
      return;
    }
    rec.state = detail::to_upper(row[1]);
    if (!is_us_state_code(rec.state)) {
      warn(result, line, Kind::unknown_state, fmt::format("unrecognized state code '{}'", row[1]));
      return;
    }
    auto price = detail::parse_double(row[2]);
    if (!price || *price <= 0.0) {
      warn(result, line, Kind::invalid_value, fmt::format("price '{}' is not a positive number", row[2]));
      return;
    }
    rec.price_usd_per_mmbtu = *price;
    auto key = std::make_pair(rec.month, rec.state);
    if (!by_key.try_emplace(key, rec).second) {
      throw DataError(fmt::format("gas_prices line {}: duplicate price for {} {}", line, rec.state,
                                  rec.month.to_string()));
    }
    ++result.accepted_rows;
  });
  for (auto& [key, rec] : by_key) result.records.push_back(std::move(rec));
  return result;
}

ParseResult<HourlyLoadRecord> parse_hourly_load(std::string_view content) {
  ParseResult<HourlyLoadRecord> result;
  std::map<std::pair<Date, int>, HourlyLoadRecord> by_key;
  const std::array<std::string_view, 3> columns = {"date", "hour", "load_mw"};
  scan_table(content, "hourly_load", columns, [&](std::size_t line, const auto& row, const std::string& problem) {
    ++result.data_rows;
    if (!problem.empty()) {
      warn(result, line, Kind::malformed_row, problem);
      return;
    }
    HourlyLoadRecord rec;
    try {
      rec.date = Date::parse(row[0]);
    } catch (const std::invalid_argument& e) {
      warn(result, line, Kind::invalid_value, e.what());
      return;
    }
    auto hour = detail::parse_long(row[1]);
    if (!hour || *hour < 0 || *hour > 23) {
      warn(result, line, Kind::invalid_value, fmt::format("hour '{}' outside 0..23", row[1]));
      return;
    }
    rec.hour = static_cast<int>(*hour);
    auto load = detail::parse_double(row[2]);
    if (!load || *load < 0.0) {
      warn(result, line, Kind::invalid_value, fmt::format("load '{}' is not a non-negative number", row[2]));
      return;
    }
    rec.load_mw = *load;
    if (!by_key.try_emplace({rec.date, rec.hour}, rec).second) {
      throw DataError(fmt::format("hourly_load line {}: duplicate entry for {} hour {}", line, rec.date.to_string(),
                                  rec.hour));
    }
    ++result.accepted_rows;
  });
  for (auto& [key, rec] : by_key) result.records.push_back(std::move(rec));
  return result;
}

std::string format_generation(const std::vector<GenerationRecord>& records) {
  std::string out = "month,plant_id,state,fuel_raw,net_generation_mwh\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{}\n", r.month.to_string(), r.plant_id, r.state, to_string(r.fuel),
                       r.net_generation_mwh);
  }
  return out;
}

std::string format_capacity(const std::vector<CapacityRecord>& records) {
  std::string out = "month,plant_id,state,fuel_raw,capacity_mw\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{}\n", r.month.to_string(), r.plant_id, r.state, to_string(r.fuel),
                       r.capacity_mw);
  }
  return out;
}

std::string format_gas_prices(const std::vector<GasPriceRecord>& records) {
  std::string out = "month,state,price_usd_per_mmbtu\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},{}\n", r.month.to_string(), r.state, r.price_usd_per_mmbtu);
  }
  return out;
}

std::string format_hourly_load(const std::vector<HourlyLoadRecord>& records) {
  std::string out = "date,hour,load_mw\n";
  for (const auto& r : records) out += fmt::format("{},{},{}\n", r.date.to_string(), r.hour, r.load_mw);
  return out;
}

}  // namespace rcf
