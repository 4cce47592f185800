#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lola/ast.hpp"

namespace lola {

enum class Location { Spawn, EvalWhen, EvalWith, Close };

struct AccessLabel {
  enum class Kind { Sync, Hold, Offset, Aggr };
  Kind kind = Kind::Sync;
  std::uint32_t offset = 0;
  Rational duration;

  // True for accesses that read the current step: Sync, Hold, Aggr and Offset(0).
  bool zero_delay() const { return kind != Kind::Offset || offset == 0; }
};

struct DependencyEdge {
  std::uint32_t source = 0;
  std::uint32_t target = 0;
  Location location = Location::EvalWith;
  AccessLabel access;
  Span span;
};

struct DependencyGraph {
  std::vector<std::string> names;
  std::vector<DependencyEdge> edges;

  std::size_t vertex_count() const { return names.size(); }
};

// One edge per syntactic access. Vertices are stream ids.
DependencyGraph build_graph(const Specification& spec);

// A cycle violating well-formedness, as indices into DependencyGraph::edges
// in traversal order.
struct CycleDiagnostic {
  std::vector<std::size_t> edges;
};

// A cycle is acceptable iff it contains a Close edge, or all of its edges
// are EvalWith edges and at least one is an offset by a nonzero amount.
// Returns one violating cycle per offending strongly connected component.
std::vector<CycleDiagnostic> check_wellformed(const DependencyGraph& g);

// Decides the cycle condition for an explicit edge sequence.
bool cycle_is_acceptable(const DependencyGraph& g, const std::vector<std::size_t>& cycle);

Diagnostics cycle_diagnostics(const DependencyGraph& g, const std::vector<CycleDiagnostic>& cycles);

std::string location_name(Location l);
std::string label_text(const DependencyEdge& e);
std::string to_dot(const DependencyGraph& g);

}  // namespace lola
