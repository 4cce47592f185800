#include "lola/trace_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace lola {
namespace {

// Splits one CSV record. Quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::optional<Rational> parse_time(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational::parse_decimal(text);
  std::int64_t n = 0;
  std::int64_t d = 0;
  auto a = std::from_chars(text.data(), text.data() + slash, n);
  auto b = std::from_chars(text.data() + slash + 1, text.data() + text.size(), d);
  if (a.ptr != text.data() + slash || b.ptr != text.data() + text.size() || d <= 0) return std::nullopt;
  return Rational(n, d);
}

std::string cell_text(const Value& v) {
  if (v.is_string()) return "\"" + v.as_string() + "\"";
  return v.to_string();
}

nlohmann::json to_json(const Value& v) {
  if (v.is_bool()) return v.as_bool();
  if (v.is_int()) return v.as_int();
  if (v.is_uint()) return v.as_uint();
  if (v.is_float()) return v.as_float();
  if (v.is_string()) return v.as_string();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : v.as_tuple()) arr.push_back(to_json(e));
  return arr;
}

}  // namespace

std::string_view trace_error_name(TraceErrorKind kind) {
  switch (kind) {
    case TraceErrorKind::MissingTimeColumn: return "MissingTimeColumn";
    case TraceErrorKind::UnknownColumn: return "UnknownColumn";
    case TraceErrorKind::NonMonotoneTime: return "NonMonotoneTime";
    case TraceErrorKind::ValueParseError: return "ValueParseError";
    case TraceErrorKind::Io: return "Io";
  }
  return "?";
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Trace read_csv_trace(std::istream& in, const Specification& spec, const std::vector<ValueType>& types) {
  std::string line;
  if (!std::getline(in, line)) throw TraceError(TraceErrorKind::MissingTimeColumn, 0, 1, "trace has no header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_record(line);
  if (header.empty() || trim(header[0]) != "time") {
    throw TraceError(TraceErrorKind::MissingTimeColumn, 0, 1, "the first column must be named 'time'");
  }
  std::vector<std::uint32_t> columns;
  for (std::size_t c = 1; c < header.size(); ++c) {
    std::string name = trim(header[c]);
    auto id = spec.find(name);
    if (!id || !spec.is_input(*id)) {
      throw TraceError(TraceErrorKind::UnknownColumn, 0, c + 1, "column '" + name + "' is not an input stream");
    }
    columns.push_back(id->value);
  }

  Trace trace;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++row;
    std::vector<std::string> cells = split_record(line);
    if (cells.size() > header.size()) {
      throw TraceError(TraceErrorKind::UnknownColumn, row, header.size() + 1, "row has more cells than the header");
    }
    auto time = parse_time(trim(cells[0]));
    if (!time || *time < Rational(0)) {
      throw TraceError(TraceErrorKind::ValueParseError, row, 1, "invalid time '" + cells[0] + "'");
    }
    if (!trace.empty() && *time <= trace.back().time) {
      throw TraceError(TraceErrorKind::NonMonotoneTime, row, 1,
                       "time " + time->to_string() + " does not follow " + trace.back().time.to_string());
    }
    TraceEvent event{*time, {}};
    for (std::size_t c = 1; c < cells.size(); ++c) {
      std::string text = trim(cells[c]);
      if (text.empty()) continue;
      std::uint32_t id = columns[c - 1];
      const ValueType& type = id < types.size() ? types[id] : ValueType::top();
      auto value = parse_value(text, type);
      if (!value) {
        throw TraceError(TraceErrorKind::ValueParseError, row, c + 1,
                         "cannot read '" + text + "' as " + type.to_string() + " for input " + spec.name(StreamId{id}));
      }
      event.values.emplace_back(id, std::move(*value));
    }
    trace.push_back(std::move(event));
  }
  return trace;
}

Trace read_csv_trace(const std::filesystem::path& path, const Specification& spec, const std::vector<ValueType>& types) {
  std::ifstream in(path);
  if (!in) throw TraceError(TraceErrorKind::Io, 0, 0, "cannot open " + path.string());
  return read_csv_trace(in, spec, types);
}

void write_csv_trace(std::ostream& out, const Trace& trace, const Specification& spec) {
  out << "time";
  for (const auto& in : spec.inputs) out << ',' << csv_field(in.name);
  out << '\n';
  for (const auto& event : trace) {
    std::vector<std::string> cells(spec.inputs.size());
    for (const auto& [id, v] : event.values) cells.at(id) = csv_field(cell_text(v));
    out << event.time.to_string();
    for (const auto& c : cells) out << ',' << c;
    out << '\n';
  }
}

void write_report(std::ostream& out, const MonitorReport& report, ReportFormat format, bool dump) {
  const auto& rows = dump ? report.dump : report.verdicts;
  if (format == ReportFormat::Csv) {
    out << "time,stream,params,value\n";
    for (const auto& r : rows) {
      out << r.time.to_string() << ',' << csv_field(report.stream_names.at(r.stream.value)) << ','
          << csv_field(tuple_to_string(r.params)) << ',' << csv_field(r.value.to_string()) << '\n';
    }
    return;
  }
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json params = nlohmann::json::array();
    for (const auto& p : r.params) params.push_back(to_json(p));
    arr.push_back({{"time", r.time.to_double()},
                   {"time_exact", r.time.to_string()},
                   {"stream", report.stream_names.at(r.stream.value)},
                   {"params", params},
                   {"value", to_json(r.value)}});
  }
  out << arr.dump(2) << '\n';
}

}  // namespace lola
