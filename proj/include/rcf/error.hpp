#pragma once

#include <stdexcept>
#include <string>

namespace rcf {

/// Base for every fatal error raised by the pipeline. Row-level problems in
/// input files are reported as warnings instead and never reach here.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Header missing a canonical column, or a file with no header at all.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Input data that cannot be reconciled: duplicate keys in non-additive
/// tables, a plant reported under two states, and so on.
class DataError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Statistics requested on data that cannot support them (too few points,
/// zero variance).
class AnalysisError : public Error {
 public:
  using Error::Error;
};

class ChartError : public Error {
 public:
  using Error::Error;
};

}  // namespace rcf
