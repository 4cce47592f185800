#include "lola/pipeline.hpp"

#include <chrono>

#include "lola/parser.hpp"

namespace lola {
namespace {

class Stopwatch {
 public:
  explicit Stopwatch(std::vector<PhaseTiming>& out, std::string phase)
      : out_(out), phase_(std::move(phase)), start_(std::chrono::steady_clock::now()) {}
  ~Stopwatch() {
    auto elapsed = std::chrono::steady_clock::now() - start_;
    out_.push_back({phase_, std::chrono::duration<double, std::milli>(elapsed).count()});
  }

 private:
  std::vector<PhaseTiming>& out_;
  std::string phase_;
  std::chrono::steady_clock::time_point start_;
};

void append(Diagnostics& into, Diagnostics from) {
  into.insert(into.end(), std::make_move_iterator(from.begin()), std::make_move_iterator(from.end()));
}

}  // namespace

Analysis analyze(std::string_view source) {
  Analysis a;
  ParseResult parsed;
  {
    Stopwatch w(a.timings, "parse");
    parsed = parse(source);
  }
  append(a.diagnostics, std::move(parsed.diagnostics));
  if (has_errors(a.diagnostics)) return a;

  DesugarResult desugared;
  {
    Stopwatch w(a.timings, "desugar");
    desugared = desugar(parsed.spec);
  }
  append(a.diagnostics, std::move(desugared.diagnostics));
  if (!desugared.spec) return a;
  a.spec = std::move(desugared.spec);
  const Specification& spec = *a.spec;

  {
    Stopwatch w(a.timings, "value types");
    auto r = check_value_types(spec);
    a.values = std::move(r.typing);
    append(a.diagnostics, std::move(r.diagnostics));
  }
  bool pacing_ok = false;
  {
    Stopwatch w(a.timings, "pacing types");
    auto r = infer_pacing(spec);
    pacing_ok = r.ok();
    a.pacing = std::move(r.info);
    append(a.diagnostics, std::move(r.diagnostics));
  }
  if (pacing_ok) {
    Stopwatch w(a.timings, "semantic types");
    auto r = check_semantic_types(spec, a.pacing);
    a.semantics = std::move(r.streams);
    append(a.diagnostics, std::move(r.diagnostics));
  }
  {
    Stopwatch w(a.timings, "well-formedness");
    a.graph = build_graph(spec);
    append(a.diagnostics, cycle_diagnostics(a.graph, check_wellformed(a.graph)));
  }
  sort_by_position(a.diagnostics);
  return a;
}

}  // namespace lola
