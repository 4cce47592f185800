#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "lola/evaluator.hpp"

namespace lola::oracle {

enum class OracleErrorKind { NoModel, MultipleModels, SyncAccessFailure, DivisionByZero };

class OracleError : public std::runtime_error {
 public:
  OracleError(OracleErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  OracleErrorKind kind() const { return kind_; }

 private:
  OracleErrorKind kind_;
};

struct OracleResult {
  MonitorReport report;
  std::size_t steps = 0;
  std::optional<Rational> last_time;
};

// Reference semantics for tiny specifications. Each step is solved by
// repeatedly applying the evaluation rules to every declaration in any order
// until nothing changes; values left undetermined are resolved by
// enumerating small candidate domains and keeping the consistent
// assignments. Never prunes histories. Processes at most `horizon` steps.
OracleResult oracle_run(const Specification& spec, const ValueTyping& types, const PacingInfo& pacing,
                        const Trace& trace, std::size_t horizon, std::optional<Rational> end_time = std::nullopt);

}  // namespace lola::oracle
