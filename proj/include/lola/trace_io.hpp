#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "lola/evaluator.hpp"

namespace lola {

enum class TraceErrorKind { MissingTimeColumn, UnknownColumn, NonMonotoneTime, ValueParseError, Io };

std::string_view trace_error_name(TraceErrorKind kind);

class TraceError : public std::runtime_error {
 public:
  // `row` counts data rows from 1 (0 is the header); `column` counts from 1.
  TraceError(TraceErrorKind kind, std::size_t row, std::size_t column, const std::string& message)
      : std::runtime_error(message), kind_(kind), row_(row), column_(column) {}

  TraceErrorKind kind() const { return kind_; }
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  TraceErrorKind kind_;
  std::size_t row_;
  std::size_t column_;
};

// CSV with a mandatory header. The first column is `time` in decimal seconds
// (or an exact fraction n/d); the others are named after inputs. An empty
// cell means the input has no value at that event. `types` supplies the
// input value types, indexed by StreamId.
Trace read_csv_trace(std::istream& in, const Specification& spec, const std::vector<ValueType>& types);
Trace read_csv_trace(const std::filesystem::path& path, const Specification& spec,
                     const std::vector<ValueType>& types);

// Inverse of read_csv_trace; every input gets a column.
void write_csv_trace(std::ostream& out, const Trace& trace, const Specification& spec);

enum class ReportFormat { Csv, Json };

// Writes the verdicts, or the full evaluation dump when `dump` is set.
void write_report(std::ostream& out, const MonitorReport& report, ReportFormat format, bool dump = false);

// One CSV field, quoted when it contains a comma, quote or line break.
std::string csv_field(const std::string& text);

}  // namespace lola
