#include "lola/dependency.hpp"

#include <algorithm>
#include <deque>
#include <optional>

namespace lola {
namespace {

void collect(const Expression& e, std::uint32_t source, Location loc, DependencyGraph& g) {
  if (e.is_access()) {
    DependencyEdge edge;
    edge.source = source;
    edge.target = e.target.value;
    edge.location = loc;
    edge.span = e.span;
    switch (e.kind) {
      case ExprKind::Sync: edge.access.kind = AccessLabel::Kind::Sync; break;
      case ExprKind::Hold: edge.access.kind = AccessLabel::Kind::Hold; break;
      case ExprKind::Offset:
        edge.access.kind = AccessLabel::Kind::Offset;
        edge.access.offset = e.offset;
        break;
      default:
        edge.access.kind = AccessLabel::Kind::Aggr;
        edge.access.duration = e.duration;
        break;
    }
    g.edges.push_back(edge);
  }
  for (const auto& a : e.args) collect(a, source, loc, g);
}

// Strongly connected components of the subgraph formed by the accepted edges.
std::vector<int> components(const DependencyGraph& g, const std::vector<bool>& use) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<std::uint32_t>> fwd(n), bwd(n);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (!use[i]) continue;
    fwd[g.edges[i].source].push_back(g.edges[i].target);
    bwd[g.edges[i].target].push_back(g.edges[i].source);
  }
  std::vector<std::uint32_t> order;
  std::vector<bool> seen(n, false);
  for (std::uint32_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{s, 0}};
    seen[s] = true;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i < fwd[v].size()) {
        std::uint32_t w = fwd[v][i++];
        if (!seen[w]) {
          seen[w] = true;
          stack.emplace_back(w, 0);
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<int> comp(n, -1);
  int next = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] >= 0) continue;
    std::vector<std::uint32_t> stack{*it};
    comp[*it] = next;
    while (!stack.empty()) {
      std::uint32_t v = stack.back();
      stack.pop_back();
      for (std::uint32_t w : bwd[v]) {
        if (comp[w] < 0) {
          comp[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

// Shortest edge path from `from` to `to` using accepted edges inside one component.
std::optional<std::vector<std::size_t>> path(const DependencyGraph& g, const std::vector<bool>& use,
                                             const std::vector<int>& comp, std::uint32_t from, std::uint32_t to) {
  if (from == to) return std::vector<std::size_t>{};
  std::vector<std::optional<std::size_t>> via(g.vertex_count());
  std::vector<bool> seen(g.vertex_count(), false);
  std::deque<std::uint32_t> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    std::uint32_t v = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      const auto& e = g.edges[i];
      if (!use[i] || e.source != v || seen[e.target] || comp[e.target] != comp[from]) continue;
      seen[e.target] = true;
      via[e.target] = i;
      if (e.target == to) {
        std::vector<std::size_t> out;
        for (std::uint32_t x = to; x != from; x = g.edges[*via[x]].source) out.push_back(*via[x]);
        std::reverse(out.begin(), out.end());
        return out;
      }
      queue.push_back(e.target);
    }
  }
  return std::nullopt;
}

}  // namespace

DependencyGraph build_graph(const Specification& spec) {
  DependencyGraph g;
  for (const auto& in : spec.inputs) g.names.push_back(in.name);
  for (std::size_t o = 0; o < spec.outputs.size(); ++o) {
    const OutputStream& out = spec.outputs[o];
    g.names.push_back(out.name);
    std::uint32_t id = spec.output_id(o).value;
    collect(out.spawn.when, id, Location::Spawn, g);
    collect(*out.spawn.with, id, Location::Spawn, g);
    collect(out.eval.when, id, Location::EvalWhen, g);
    collect(*out.eval.with, id, Location::EvalWith, g);
    collect(out.close.when, id, Location::Close, g);
  }
  return g;
}

bool cycle_is_acceptable(const DependencyGraph& g, const std::vector<std::size_t>& cycle) {
  bool has_close = false;
  bool all_with = true;
  bool has_delay = false;
  for (std::size_t i : cycle) {
    const auto& e = g.edges[i];
    has_close |= e.location == Location::Close;
    all_with &= e.location == Location::EvalWith;
    has_delay |= !e.access.zero_delay();
  }
  return has_close || (all_with && has_delay);
}

std::vector<CycleDiagnostic> check_wellformed(const DependencyGraph& g) {
  std::vector<CycleDiagnostic> out;
  std::vector<bool> open(g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) open[i] = g.edges[i].location != Location::Close;
  std::vector<int> comp = components(g, open);
  std::vector<bool> reported(g.vertex_count() + 1, false);

  // A non-EvalWith edge inside a component lies on a close-free cycle.
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (!open[i] || e.location == Location::EvalWith || comp[e.source] != comp[e.target]) continue;
    if (reported[comp[e.source]]) continue;
    auto back = path(g, open, comp, e.target, e.source);
    if (!back) continue;
    reported[comp[e.source]] = true;
    CycleDiagnostic d;
    d.edges.push_back(i);
    d.edges.insert(d.edges.end(), back->begin(), back->end());
    out.push_back(std::move(d));
  }

  // A cycle of zero-delay EvalWith edges.
  std::vector<bool> instant(g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    instant[i] = g.edges[i].location == Location::EvalWith && g.edges[i].access.zero_delay();
  }
  std::vector<int> icomp = components(g, instant);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (!instant[i] || icomp[e.source] != icomp[e.target]) continue;
    if (reported[comp[e.source]]) continue;
    auto back = path(g, instant, icomp, e.target, e.source);
    if (!back) continue;
    reported[comp[e.source]] = true;
    CycleDiagnostic d;
    d.edges.push_back(i);
    d.edges.insert(d.edges.end(), back->begin(), back->end());
    out.push_back(std::move(d));
  }
  return out;
}

std::string location_name(Location l) {
  switch (l) {
    case Location::Spawn: return "Spawn";
    case Location::EvalWhen: return "EvalWhen";
    case Location::EvalWith: return "EvalWith";
    case Location::Close: return "Close";
  }
  return "?";
}

std::string label_text(const DependencyEdge& e) {
  std::string kind;
  switch (e.access.kind) {
    case AccessLabel::Kind::Sync: kind = "Sync"; break;
    case AccessLabel::Kind::Hold: kind = "Hold"; break;
    case AccessLabel::Kind::Offset: kind = "Offset(" + std::to_string(e.access.offset) + ")"; break;
    case AccessLabel::Kind::Aggr: kind = "Aggr(" + e.access.duration.to_string() + "s)"; break;
  }
  return location_name(e.location) + "/" + kind;
}

Diagnostics cycle_diagnostics(const DependencyGraph& g, const std::vector<CycleDiagnostic>& cycles) {
  Diagnostics out;
  for (const auto& c : cycles) {
    std::string trail = g.names[g.edges[c.edges.front()].source];
    for (std::size_t i : c.edges) {
      trail += " -[" + label_text(g.edges[i]) + "]-> " + g.names[g.edges[i].target];
    }
    out.push_back(error(DiagCode::CyclicDependency, g.edges[c.edges.front()].span,
                        "cyclic dependency without delay", trail));
  }
  sort_by_position(out);
  return out;
}

std::string to_dot(const DependencyGraph& g) {
  auto quote = [](const std::string& s) { return "\"" + s + "\""; };
  std::string out = "digraph dependencies {\n";
  for (const auto& n : g.names) out += "  " + quote(n) + ";\n";
  for (const auto& e : g.edges) {
    out += "  " + quote(g.names[e.source]) + " -> " + quote(g.names[e.target]) + " [label=" + quote(label_text(e)) +
           "];\n";
  }
  return out + "}\n";
}

}  // namespace lola
