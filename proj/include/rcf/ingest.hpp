#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rcf/calendar.hpp"
#include "rcf/regions.hpp"

namespace rcf {

/// Net generation of one plant for one normalized fuel in one month.
struct GenerationRecord {
  YearMonth month;
  long plant_id = 0;
  std::string state;
  Fuel fuel = Fuel::other;
  double net_generation_mwh = 0.0;  // negative for pumped storage / station service

  bool operator==(const GenerationRecord&) const = default;
};

/// Nameplate capacity of one plant for one normalized fuel in one month,
/// summed over units.
struct CapacityRecord {
  YearMonth month;
  long plant_id = 0;
  std::string state;
  Fuel fuel = Fuel::other;
  double capacity_mw = 0.0;

  bool operator==(const CapacityRecord&) const = default;
};

struct GasPriceRecord {
  YearMonth month;
  std::string state;
  double price_usd_per_mmbtu = 0.0;

  bool operator==(const GasPriceRecord&) const = default;
};

struct HourlyLoadRecord {
  Date date;
  int hour = 0;  // hour-beginning, 0..23
  double load_mw = 0.0;

  bool operator==(const HourlyLoadRecord&) const = default;
};

/// A data row that was skipped. `line` is the 1-based physical line number in
/// the source text.
struct IngestWarning {
  enum class Kind { malformed_row, invalid_value, unknown_state, out_of_window };

  std::size_t line = 0;
  Kind kind = Kind::malformed_row;
  std::string message;

  bool operator==(const IngestWarning&) const = default;
};

std::string_view to_string(IngestWarning::Kind kind);

/// Records plus the rows that did not make it. Every data row is either
/// accepted (possibly merged with others under the same key) or warned about:
/// accepted_rows + warnings.size() == data_rows.
template <class Record>
struct ParseResult {
  std::vector<Record> records;
  std::vector<IngestWarning> warnings;
  std::size_t data_rows = 0;
  std::size_t accepted_rows = 0;
};

/// Canonical generation table: month,plant_id,state,fuel_raw,net_generation_mwh.
/// Rows sharing (month, plant_id, fuel) are summed. Months outside the study
/// window are skipped with a warning. Output is sorted by (month, plant, fuel).
ParseResult<GenerationRecord> parse_generation(std::string_view content, const RegionConfig& config);

/// Canonical capacity table: month,plant_id,state,fuel_raw,capacity_mw.
/// Unit-level rows are summed to plant-fuel-month; negative capacity is
/// rejected row by row.
ParseResult<CapacityRecord> parse_capacity(std::string_view content, const RegionConfig& config);

/// Canonical gas price table: month,state,price_usd_per_mmbtu. Prices must be
/// positive. A repeated (month, state) is a DataError since prices do not add.
ParseResult<GasPriceRecord> parse_gas_prices(std::string_view content);

/// Canonical hourly load table: date,hour,load_mw. A repeated (date, hour) is
/// a DataError.
ParseResult<HourlyLoadRecord> parse_hourly_load(std::string_view content);

// Canonical writers. Fuel is written as its normalized label, which every
// config maps back to itself.
std::string format_generation(const std::vector<GenerationRecord>& records);
std::string format_capacity(const std::vector<CapacityRecord>& records);
std::string format_gas_prices(const std::vector<GasPriceRecord>& records);
std::string format_hourly_load(const std::vector<HourlyLoadRecord>& records);

/// Whole-file read; throws rcf::Error when the file cannot be opened.
std::string read_file(const std::string& path);

}  // namespace rcf
