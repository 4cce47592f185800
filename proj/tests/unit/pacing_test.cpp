#include <gtest/gtest.h>

#include "fixtures.hpp"

namespace lola {
namespace {

PacingType ev(std::vector<ActivationFormula::Clause> clauses) {
  return PacingType::event(ActivationFormula::from_clauses(std::move(clauses)));
}

TEST(Activation, MinimalFormIsCanonical) {
  auto a = ActivationFormula::input(0) || (ActivationFormula::input(0) && ActivationFormula::input(1));
  EXPECT_EQ(a, ActivationFormula::input(0));
  auto b = (ActivationFormula::input(0) || ActivationFormula::input(1)) && ActivationFormula::input(2);
  EXPECT_EQ(b, ActivationFormula::from_clauses({{0, 2}, {1, 2}}));
  EXPECT_TRUE(b.implies(ActivationFormula::input(2)));
  EXPECT_FALSE(ActivationFormula::input(2).implies(b));
}

TEST(Pacing, EventOrderFollowsImplication) {
  EXPECT_TRUE(pt_le(ev({{0, 1}}), ev({{0}})));
  EXPECT_FALSE(pt_le(ev({{0}}), ev({{0, 1}})));
  EXPECT_TRUE(pt_le(ev({{0}}), PacingType::top()));
  EXPECT_FALSE(pt_le(ev({{0}}), PacingType::periodic()));
}

TEST(Pacing, PeriodicOrderFollowsDivisibility) {
  EXPECT_TRUE(pt_le(PacingType::global(Rational(2)), PacingType::global(Rational(1))));
  EXPECT_FALSE(pt_le(PacingType::global(Rational(1)), PacingType::global(Rational(2))));
  EXPECT_FALSE(pt_le(PacingType::global(Rational(3)), PacingType::global(Rational(2))));
  EXPECT_FALSE(pt_le(PacingType::global(Rational(1)), PacingType::local(Rational(1))));
  EXPECT_TRUE(pt_le(PacingType::local(Rational(1)), PacingType::periodic()));
}

TEST(Pacing, MeetAndJoinUseLcmAndGcd) {
  EXPECT_EQ(pt_meet(PacingType::global(Rational(2)), PacingType::global(Rational(3))), PacingType::global(Rational(6)));
  EXPECT_EQ(pt_join(PacingType::global(Rational(2)), PacingType::global(Rational(3))), PacingType::global(Rational(1)));
  EXPECT_EQ(pt_join(PacingType::global(Rational(1, 2)), PacingType::global(Rational(1, 3))),
            PacingType::global(Rational(1, 6)));
  EXPECT_EQ(pt_meet(PacingType::global(Rational(1)), PacingType::local(Rational(1))), PacingType::bottom());
  EXPECT_EQ(pt_join(PacingType::global(Rational(1)), PacingType::local(Rational(1))), PacingType::periodic());
  EXPECT_EQ(pt_meet(ev({{0}}), ev({{1}})), ev({{0, 1}}));
  EXPECT_EQ(pt_join(ev({{0}}), ev({{1}})), ev({{0}, {1}}));
  EXPECT_EQ(pt_join(ev({{0}}), PacingType::global(Rational(1))), PacingType::top());
  EXPECT_EQ(pt_meet(ev({{0}}), PacingType::global(Rational(1))), PacingType::bottom());
}

TEST(Pacing, MeetIsGreatestLowerBoundOverSmallUniverse) {
  std::vector<PacingType> u = {PacingType::top(), PacingType::periodic(), PacingType::bottom(), ev({{0}}), ev({{1}}),
                               ev({{0, 1}}), ev({{0}, {1}})};
  for (int k : {1, 2, 3, 4, 6, 12}) {
    u.push_back(PacingType::global(Rational(k)));
    u.push_back(PacingType::local(Rational(k)));
  }
  for (const auto& a : u) {
    for (const auto& b : u) {
      PacingType m = pt_meet(a, b);
      ASSERT_TRUE(pt_le(m, a) && pt_le(m, b));
      for (const auto& c : u) {
        if (pt_le(c, a) && pt_le(c, b)) {
          EXPECT_TRUE(pt_le(c, m));
        }
      }
    }
  }
}

TEST(Pacing, InfersEventPacingFromAccesses) {
  Analysis a = analyze("input x: Int\ninput y: Int\noutput s := x + y\noutput t @x || y := x.hold(or: 0)\n");
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(a.pacing.streams[a.spec->find("s")->value].eval, ev({{0, 1}}));
  EXPECT_EQ(a.pacing.streams[a.spec->find("t")->value].eval, ev({{0}, {1}}));
}

TEST(Pacing, HoldAloneLeavesPacingUnderspecified) {
  Analysis a = analyze("input x: Int\noutput u := x.hold(or: 0)");
  EXPECT_TRUE(testing::has_code(a.diagnostics, DiagCode::UnderspecifiedPacing));
}

TEST(Pacing, FrequencyIsGlobalUnlessSpawned) {
  Analysis a = analyze("input x: Int\noutput g @2Hz := 1\noutput l(p) spawn with x eval @2Hz with p");
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(a.pacing.streams[a.spec->find("g")->value].eval, PacingType::global(Rational(1, 2)));
  EXPECT_EQ(a.pacing.streams[a.spec->find("l")->value].eval, PacingType::local(Rational(1, 2)));
}

TEST(Pacing, AggregationRequiresPeriodicStream) {
  Analysis a = analyze("input x: Int\noutput s @x := x.aggregate(over: 1s, using: sum)");
  EXPECT_FALSE(a.ok());
  EXPECT_TRUE(testing::has_code(a.diagnostics, DiagCode::PacingMismatch));
}

TEST(Pacing, SyncFromSlowerPeriodIsAccepted) {
  EXPECT_TRUE(analyze("output a @2Hz := 1\noutput b @1Hz := a").ok());
  EXPECT_FALSE(analyze("output a @1Hz := 1\noutput b @2Hz := a").ok());
}

TEST(Pacing, NegativeSpecRejectedAtAccess) {
  std::string source = testing::read_file(testing::spec_dir() / "negative" / "sync_global_from_event.lola");
  Analysis a = analyze(source);
  ASSERT_FALSE(a.ok());
  SourceMap map(source);
  const Diagnostic* err = nullptr;
  for (const auto& d : a.diagnostics) {
    if (d.severity == Severity::Error) err = &d;
  }
  ASSERT_NE(err, nullptr);
  EXPECT_EQ(err->code, DiagCode::PacingMismatch);
  EXPECT_EQ(map.position(err->span.begin).line, 3u);
  EXPECT_EQ(map.position(err->span.begin).column, 17u);
}

TEST(Pacing, ToStringNamesInputs) {
  auto name = [](std::uint32_t i) { return std::string(1, static_cast<char>('a' + i)); };
  EXPECT_EQ(ev({{0, 1}}).to_string(name), "Event(a && b)");
}

}  // namespace
}  // namespace lola
