#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lola/parser.hpp"

namespace lola {
namespace {

DependencyGraph graph_of(const std::string& source) {
  ParseResult p = parse(source);
  DesugarResult d = desugar(p.spec);
  EXPECT_TRUE(d.spec) << source;
  return d.spec ? build_graph(*d.spec) : DependencyGraph{};
}

DependencyEdge edge(std::uint32_t from, std::uint32_t to, Location loc, AccessLabel::Kind kind, std::uint32_t offset = 0) {
  DependencyEdge e;
  e.source = from;
  e.target = to;
  e.location = loc;
  e.access.kind = kind;
  e.access.offset = offset;
  return e;
}

TEST(Wellformedness, OneEdgePerAccess) {
  DependencyGraph g = graph_of("input x: Int\noutput a := x + x.offset(by: -1).defaults(to: 0)");
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.edges[0].source, 1u);
  EXPECT_EQ(g.edges[0].target, 0u);
  EXPECT_EQ(g.edges[1].access.kind, AccessLabel::Kind::Offset);
  EXPECT_EQ(g.edges[1].access.offset, 1u);
}

TEST(Wellformedness, DelayedSelfReferenceIsAccepted) {
  DependencyGraph g = graph_of("input x: Int\noutput a := a.offset(by: -1).defaults(to: 0) + x");
  EXPECT_TRUE(check_wellformed(g).empty());
}

TEST(Wellformedness, ZeroDelayCycleIsRejected) {
  DependencyGraph g = graph_of("input x: Int\noutput a := b + x\noutput b := a");
  auto cycles = check_wellformed(g);
  ASSERT_EQ(cycles.size(), 1u);
  EXPECT_EQ(cycles[0].edges.size(), 2u);
  EXPECT_FALSE(cycle_is_acceptable(g, cycles[0].edges));
  Diagnostics d = cycle_diagnostics(g, cycles);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].code, DiagCode::CyclicDependency);
}

TEST(Wellformedness, DelayedCycleThroughConditionIsRejected) {
  DependencyGraph g = graph_of("input x: Int\noutput a eval when a.offset(by: -1).defaults(to: true) with x > 0");
  EXPECT_FALSE(check_wellformed(g).empty());
}

TEST(Wellformedness, CloseEdgeBreaksCycle) {
  DependencyGraph g;
  g.names = {"a", "b"};
  g.edges = {edge(0, 1, Location::Close, AccessLabel::Kind::Sync), edge(1, 0, Location::EvalWith, AccessLabel::Kind::Sync)};
  EXPECT_TRUE(check_wellformed(g).empty());
}

TEST(Wellformedness, EveryViolatingComponentIsReported) {
  DependencyGraph g;
  g.names = {"a", "b", "c"};
  g.edges = {edge(0, 0, Location::EvalWith, AccessLabel::Kind::Sync),
             edge(1, 2, Location::Spawn, AccessLabel::Kind::Hold),
             edge(2, 1, Location::EvalWith, AccessLabel::Kind::Offset, 2)};
  EXPECT_EQ(check_wellformed(g).size(), 2u);
}

TEST(Wellformedness, ParallelEdgesAreDistinguished) {
  DependencyGraph g;
  g.names = {"a"};
  g.edges = {edge(0, 0, Location::EvalWith, AccessLabel::Kind::Offset, 1),
             edge(0, 0, Location::EvalWith, AccessLabel::Kind::Hold)};
  auto cycles = check_wellformed(g);
  ASSERT_EQ(cycles.size(), 1u);
  EXPECT_EQ(cycles[0].edges, std::vector<std::size_t>{1});
}

TEST(Wellformedness, DotOutputNamesStreams) {
  DependencyGraph g = graph_of("input x: Int\noutput a := x");
  std::string dot = to_dot(g);
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  EXPECT_NE(dot.find("\"a\""), std::string::npos);
}

TEST(Wellformedness, CorpusIsWellFormed) {
  for (const char* name : {"intruder", "waypoint", "watchdog", "rcc", "ffd", "geofence"}) {
    std::string source = testing::read_file(testing::spec_dir() / "corpus" / (std::string(name) + ".lola"));
    EXPECT_TRUE(check_wellformed(graph_of(source)).empty()) << name;
  }
}

}  // namespace
}  // namespace lola
