#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lola/ast.hpp"
#include "lola/pacing.hpp"
#include "lola/pipeline.hpp"
#include "lola/value_check.hpp"

namespace lola {

struct TraceEvent {
  Rational time;
  // Input id and value; at most one entry per input.
  std::vector<std::pair<std::uint32_t, Value>> values;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

using Trace = std::vector<TraceEvent>;

struct ReportRow {
  Rational time;
  StreamId stream;
  Tuple params;
  Value value;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct MonitorReport {
  // Indexed by StreamId::value.
  std::vector<std::string> stream_names;
  // Trigger firings.
  std::vector<ReportRow> verdicts;
  // Every output evaluation, filled only in dump mode.
  std::vector<ReportRow> dump;

  friend bool operator==(const MonitorReport&, const MonitorReport&) = default;
};

enum class TieBreak { Forward, Reversed };

struct MonitorOptions {
  // Order among declarations that do not depend on each other.
  TieBreak tie_break = TieBreak::Forward;
  // Last time point to process; defaults to the time of the last event.
  std::optional<Rational> end_time;
  bool dump = false;
};

enum class MonitorErrorKind { SyncAccessFailure, NonMonotoneTrace, UnknownInput, DivisionByZero, CyclicSchedule };

std::string_view monitor_error_name(MonitorErrorKind kind);

class MonitorError : public std::runtime_error {
 public:
  MonitorError(MonitorErrorKind kind, Rational time, Span span, const std::string& message)
      : std::runtime_error(message), kind_(kind), time_(time), span_(span) {}

  MonitorErrorKind kind() const { return kind_; }
  const Rational& time() const { return time_; }
  Span span() const { return span_; }

 private:
  MonitorErrorKind kind_;
  Rational time_;
  Span span_;
};

// Whether a declaration with pacing `p` is due at `now`. Local periods count
// from `spawn_time` and are not due at the spawn instant itself; Top is
// always due, Periodic and Bottom never are.
bool eval_pacing(const PacingType& p, const Rational& now, const Rational& spawn_time,
                 const std::function<bool(std::uint32_t)>& fresh);

// Incremental engine. The specification, typing and pacing information must
// outlive the monitor.
class Monitor {
 public:
  Monitor(const Specification& spec, const ValueTyping& types, const PacingInfo& pacing, MonitorOptions options = {});
  ~Monitor();
  Monitor(Monitor&&) noexcept;
  Monitor& operator=(Monitor&&) noexcept;

  // Processes one step at `now` with the given fresh input values.
  void step(const Rational& now, const std::vector<std::pair<std::uint32_t, Value>>& inputs);

  // Earliest periodic due time strictly after `after` (or at or after 0
  // when nothing has been processed yet).
  std::optional<Rational> next_deadline(const std::optional<Rational>& after) const;

  std::vector<Tuple> instances(StreamId stream) const;
  // Latest stored value of an alive instance.
  std::optional<Value> last_value(StreamId stream, const Tuple& params = {}) const;
  std::size_t instance_count() const;

  const MonitorReport& report() const;
  MonitorReport take_report();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Replays a trace, merging event times with periodic due times.
MonitorReport run(const Specification& spec, const ValueTyping& types, const PacingInfo& pacing, const Trace& trace,
                  const MonitorOptions& options = {});
MonitorReport run(const Analysis& analysis, const Trace& trace, const MonitorOptions& options = {});

}  // namespace lola
