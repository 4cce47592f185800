#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lola/parser.hpp"

namespace lola {
namespace {

SemanticType keys(std::vector<std::string> k) { return SemanticType::from_keys(std::move(k)); }

TEST(SemanticLattice, MoreConjunctsIsLower) {
  EXPECT_TRUE(st_le(keys({"a", "b"}), keys({"a"})));
  EXPECT_FALSE(st_le(keys({"a"}), keys({"a", "b"})));
  EXPECT_TRUE(st_le(keys({"a"}), SemanticType::top()));
  EXPECT_TRUE(st_le(SemanticType::bottom(), keys({"a"})));
  EXPECT_FALSE(st_le(keys({"a"}), keys({"b"})));
}

TEST(SemanticLattice, MeetUnitesAndJoinIntersects) {
  EXPECT_EQ(st_meet(keys({"a"}), keys({"b"})), keys({"a", "b"}));
  EXPECT_EQ(st_join(keys({"a", "b"}), keys({"b", "c"})), keys({"b"}));
  EXPECT_EQ(st_join(keys({"a"}), keys({"b"})), SemanticType::top());
  EXPECT_EQ(st_meet(SemanticType::bottom(), keys({"a"})), SemanticType::bottom());
}

TEST(SemanticLattice, ExhaustiveGreatestLowerBound) {
  std::vector<SemanticType> u = {SemanticType::top(), SemanticType::bottom()};
  for (unsigned mask = 1; mask < 8; ++mask) {
    std::vector<std::string> k;
    for (unsigned i = 0; i < 3; ++i) {
      if (mask & (1u << i)) k.push_back(std::string(1, static_cast<char>('a' + i)));
    }
    u.push_back(keys(k));
  }
  for (const auto& a : u) {
    for (const auto& b : u) {
      SemanticType m = st_meet(a, b);
      SemanticType j = st_join(a, b);
      for (const auto& c : u) {
        EXPECT_EQ(st_le(c, a) && st_le(c, b), st_le(c, m));
        EXPECT_EQ(st_le(a, c) && st_le(b, c), st_le(j, c));
      }
    }
  }
}

TEST(SemanticLattice, ConjunctionOrderDoesNotMatter) {
  ParseResult p = parse("input a: Bool\ninput b: Bool\noutput x := a && b\noutput y := b && a");
  DesugarResult d = desugar(p.spec);
  ASSERT_TRUE(d.spec);
  SemanticType x = SemanticType::from_expression(*d.spec->outputs[0].eval.with, *d.spec, nullptr);
  SemanticType y = SemanticType::from_expression(*d.spec->outputs[1].eval.with, *d.spec, nullptr);
  EXPECT_EQ(x, y);
  EXPECT_EQ(x.conjuncts().size(), 2u);
}

TEST(ParamEquality, RelatesIdenticalSpawnExpressions) {
  ParseResult p = parse(
      "input i: Int\ninput j: Int\n"
      "output a(p) spawn with i eval with p\n"
      "output b(q, r) spawn with (j, i) eval with r\n");
  DesugarResult d = desugar(p.spec);
  ASSERT_TRUE(d.spec);
  ParamEqRelation rel(*d.spec);
  StreamId a = *d.spec->find("a");
  StreamId b = *d.spec->find("b");
  EXPECT_TRUE(rel.related(a, 0, b, 1));
  EXPECT_FALSE(rel.related(a, 0, b, 0));
  EXPECT_EQ(rel.pairs(a, b), (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}}));
}

TEST(SemanticTypes, FilteredTargetNeedsMatchingFilter) {
  EXPECT_FALSE(analyze("input x: Int\noutput f eval when x > 0 with x\noutput g := f").ok());
  EXPECT_TRUE(analyze("input x: Int\noutput f eval when x > 0 with x\noutput g eval when x > 0 with f").ok());
  EXPECT_TRUE(
      analyze("input x: Int\ninput y: Bool\noutput f eval when x > 0 with x\noutput g eval when y && x > 0 with f").ok());
}

TEST(SemanticTypes, ParameterMismatchIsReported) {
  Analysis a = testing::analyze_file(testing::spec_dir() / "negative" / "parameter_equality.lola");
  EXPECT_FALSE(a.ok());
  int count = 0;
  for (const auto& d : a.diagnostics) count += d.code == DiagCode::ParameterMismatch;
  EXPECT_EQ(count, 1);
}

TEST(SemanticTypes, ShiftedLocalClockIsReported) {
  Analysis a = testing::analyze_file(testing::spec_dir() / "negative" / "motivating.lola");
  int count = 0;
  for (const auto& d : a.diagnostics) count += d.code == DiagCode::LocalSyncViolation;
  EXPECT_EQ(count, 2);
}

TEST(SemanticTypes, CorpusTriplesAreComputed) {
  Analysis a = testing::analyze_file(testing::spec_dir() / "corpus" / "watchdog.lola");
  ASSERT_TRUE(a.ok());
  ASSERT_EQ(a.semantics.size(), a.spec->stream_count());
  const SemanticTriple& alive = a.semantics[a.spec->find("is_alive")->value];
  EXPECT_TRUE(alive.eval.is_top());
  EXPECT_FALSE(alive.close.is_bottom());
}

}  // namespace
}  // namespace lola
