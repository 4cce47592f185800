#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "lola/evaluator.hpp"

namespace lola {

enum class BenchKind { SyncChain, ParamChain, ConjunctChain };

// Accepts "sync", "param" and "conjunct" as well as the names returned by
// bench_kind_name.
std::optional<BenchKind> bench_kind_from_name(std::string_view name);
std::string_view bench_kind_name(BenchKind kind);

// Specification source of the given family with n ≥ 1 chained streams.
std::string generate(BenchKind kind, std::size_t n);

// Deterministic in `seed`. The result passes every static check; `budget`
// bounds the number of output streams.
std::string random_welltyped(std::uint64_t seed, std::size_t budget);

// `events` events with strictly increasing times in steps of 1/4, 1/2 or 1
// seconds, each carrying a nonempty random subset of the inputs. Integers
// are drawn from [0, max_int], floats from multiples of 1/2 up to max_int.
Trace random_trace(const Specification& spec, const ValueTyping& types, std::uint64_t seed, std::size_t events,
                   int max_int = 3);

}  // namespace lola
