#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lola/evaluator.hpp"

namespace lola {
namespace {

Value i64(std::int64_t v) { return Value(v); }

struct Monitored {
  Analysis analysis;
  MonitorReport report;
};

Monitored monitor(const std::string& source, const Trace& trace, std::optional<Rational> end = std::nullopt) {
  Monitored r{analyze(source), {}};
  EXPECT_TRUE(r.analysis.ok()) << source;
  MonitorOptions options;
  options.dump = true;
  options.end_time = end;
  r.report = run(r.analysis, trace, options);
  return r;
}

std::vector<Value> values_of(const Monitored& r, const char* stream) {
  std::vector<Value> out;
  StreamId id = *r.analysis.spec->find(stream);
  for (const auto& row : r.report.dump) {
    if (row.stream == id) out.push_back(row.value);
  }
  return out;
}

std::vector<Rational> times_of(const Monitored& r, const char* stream) {
  std::vector<Rational> out;
  StreamId id = *r.analysis.spec->find(stream);
  for (const auto& row : r.report.dump) {
    if (row.stream == id) out.push_back(row.time);
  }
  return out;
}

TEST(EvalPacing, Examples) {
  auto fresh = [](std::uint32_t i) { return i == 0; };
  EXPECT_TRUE(eval_pacing(PacingType::top(), Rational(3), Rational(0), fresh));
  EXPECT_FALSE(eval_pacing(PacingType::periodic(), Rational(3), Rational(0), fresh));
  EXPECT_FALSE(eval_pacing(PacingType::bottom(), Rational(3), Rational(0), fresh));
  EXPECT_TRUE(eval_pacing(PacingType::event(ActivationFormula::input(0)), Rational(3), Rational(0), fresh));
  EXPECT_FALSE(eval_pacing(PacingType::event(ActivationFormula::input(1)), Rational(3), Rational(0), fresh));
  EXPECT_TRUE(eval_pacing(PacingType::global(Rational(1, 2)), Rational(3, 2), Rational(0), fresh));
  EXPECT_FALSE(eval_pacing(PacingType::global(Rational(1)), Rational(3, 2), Rational(0), fresh));
  EXPECT_FALSE(eval_pacing(PacingType::local(Rational(1)), Rational(1, 2), Rational(1, 2), fresh));
  EXPECT_TRUE(eval_pacing(PacingType::local(Rational(1)), Rational(3, 2), Rational(1, 2), fresh));
  EXPECT_FALSE(eval_pacing(PacingType::local(Rational(1)), Rational(2), Rational(1, 2), fresh));
}

TEST(Evaluator, EventStreamFollowsInput) {
  Trace t{{Rational(0), {{0, i64(1)}}}, {Rational(1), {{0, i64(5)}}}};
  Monitored r = monitor("input x: Int\noutput y := x * 2\noutput z := y.offset(by: -1).defaults(to: -1)", t);
  EXPECT_EQ(values_of(r, "y"), (std::vector<Value>{i64(2), i64(10)}));
  EXPECT_EQ(values_of(r, "z"), (std::vector<Value>{i64(-1), i64(2)}));
}

TEST(Evaluator, CountsWindow) {
  Trace t{{Rational(1, 2), {{0, i64(1)}}}, {Rational(3, 2), {{0, i64(2)}}}};
  Monitored r = monitor("input x: Int\noutput c @1Hz := x.aggregate(over: 2s, using: count)", t, Rational(3));
  EXPECT_EQ(times_of(r, "c"), (std::vector<Rational>{Rational(0), Rational(1), Rational(2), Rational(3)}));
  std::vector<Value> expected = {Value(std::uint64_t{0}), Value(std::uint64_t{1}), Value(std::uint64_t{2}),
                                 Value(std::uint64_t{1})};
  EXPECT_EQ(values_of(r, "c"), expected);
}

TEST(Evaluator, EmptyTraceRunsPeriodicStreamsUntilEnd) {
  Monitored r = monitor("output g @1Hz := 7", {}, Rational(3));
  EXPECT_EQ(times_of(r, "g"), (std::vector<Rational>{Rational(0), Rational(1), Rational(2), Rational(3)}));
}

TEST(Evaluator, EmptyTraceWithoutEndDoesNothing) {
  Monitored r = monitor("output g @1Hz := 7", {});
  EXPECT_TRUE(r.report.dump.empty());
}

TEST(Evaluator, RejectsNonMonotoneTrace) {
  Analysis a = analyze("input x: Int\noutput y := x");
  Trace t{{Rational(1), {{0, i64(1)}}}, {Rational(1), {{0, i64(2)}}}};
  try {
    run(a, t);
    FAIL();
  } catch (const MonitorError& e) {
    EXPECT_EQ(e.kind(), MonitorErrorKind::NonMonotoneTrace);
  }
}

TEST(Evaluator, DivisionByZeroIsAFault) {
  Analysis a = analyze("input x: Int\noutput y := 10 / x");
  try {
    run(a, {{Rational(0), {{0, i64(0)}}}});
    FAIL();
  } catch (const MonitorError& e) {
    EXPECT_EQ(e.kind(), MonitorErrorKind::DivisionByZero);
  }
}

TEST(Evaluator, IntegersWrapToTheirWidth) {
  Trace t{{Rational(0), {{0, Value(std::int64_t{100})}}}};
  Monitored r = monitor("input x: Int8\noutput y := x + 100\noutput z: UInt8 := cast<Int8, UInt8>(x - 101)", t);
  EXPECT_EQ(values_of(r, "y"), std::vector<Value>{i64(-56)});
  EXPECT_EQ(values_of(r, "z"), std::vector<Value>{Value(std::uint64_t{255})});
}

TEST(Evaluator, FloatCastSaturates) {
  Trace t{{Rational(0), {{0, Value(1e10)}}}};
  Monitored r = monitor("input x: Float\noutput y := cast<Float, Int16>(x)\noutput z := cast<Float, UInt8>(0.0 - x)", t);
  EXPECT_EQ(values_of(r, "y"), std::vector<Value>{i64(32767)});
  EXPECT_EQ(values_of(r, "z"), std::vector<Value>{Value(std::uint64_t{0})});
}

TEST(Evaluator, FormatSubstitutesInOrder) {
  Trace t{{Rational(0), {{0, i64(3)}}}};
  Monitored r = monitor("input x: Int\noutput s := \"{} of {{{}}}\".format(x, x + 1)", t);
  EXPECT_EQ(values_of(r, "s"), std::vector<Value>{Value("3 of {4}")});
}

TEST(Evaluator, SpawnsCloseAndLocalClocks) {
  const char* spec =
      "input x: Int\n"
      "output f(p) spawn with x eval @1Hz with p\n"
      "output g(p) spawn with x eval when x = p with p close when x = p && x > 5\n";
  Trace t{{Rational(0), {{0, i64(1)}}}, {Rational(1, 2), {{0, i64(2)}}}, {Rational(2), {{0, i64(9)}}}};
  Monitored r = monitor(spec, t);
  EXPECT_EQ(times_of(r, "f"), (std::vector<Rational>{Rational(1), Rational(3, 2), Rational(2)}));
  EXPECT_EQ(values_of(r, "g"), (std::vector<Value>{i64(1), i64(2), i64(9)}));
  Monitor m(*r.analysis.spec, r.analysis.values, r.analysis.pacing);
  m.step(Rational(0), {{0, i64(6)}});
  EXPECT_TRUE(m.instances(*r.analysis.spec->find("g")).empty());
  EXPECT_EQ(m.instances(*r.analysis.spec->find("f")).size(), 1u);
  EXPECT_EQ(m.next_deadline(Rational(0)), Rational(1));
}

TEST(Evaluator, TriggersProduceVerdicts) {
  Trace t{{Rational(0), {{0, i64(1)}}}, {Rational(1), {{0, i64(9)}}}};
  Analysis a = analyze("input x: Int\ntrigger x > 5 \"high\"");
  ASSERT_TRUE(a.ok());
  MonitorReport r = run(a, t);
  ASSERT_EQ(r.verdicts.size(), 1u);
  EXPECT_EQ(r.verdicts[0].time, Rational(1));
  EXPECT_EQ(r.verdicts[0].value, Value("high"));
  EXPECT_TRUE(r.dump.empty());
}

TEST(Evaluator, OverExactlyIsAbsentBeforeFullWindow) {
  Trace t{{Rational(0), {{0, i64(1)}}}, {Rational(1), {{0, i64(2)}}}, {Rational(2), {{0, i64(3)}}}};
  Monitored r = monitor("input x: Int\noutput s @1Hz := x.aggregate(over_exactly: 2s, using: sum).defaults(to: -1)", t);
  EXPECT_EQ(values_of(r, "s"), (std::vector<Value>{i64(-1), i64(-1), i64(5)}));
}

TEST(Evaluator, UncheckedSyncAccessFails) {
  Analysis a = analyze("input a: Int\noutput b @1Hz := 42\noutput c @a := b");
  ASSERT_TRUE(a.spec);
  ASSERT_FALSE(a.ok());
  try {
    run(a, {{Rational(1, 2), {{0, i64(1)}}}});
    FAIL();
  } catch (const MonitorError& e) {
    EXPECT_EQ(e.kind(), MonitorErrorKind::SyncAccessFailure);
  }
}

TEST(Evaluator, ReversedTieBreakGivesSameReport) {
  Analysis a = testing::analyze_file(testing::spec_dir() / "corpus" / "waypoint.lola");
  Trace t{{Rational(0), {{1, Value(Tuple{Value(0.0), Value(0.0)})}, {0, Value(Tuple{Value(1.0), Value(1.0)})}}},
          {Rational(1), {{0, Value(Tuple{Value(0.5), Value(0.5)})}}}};
  MonitorOptions forward;
  forward.dump = true;
  MonitorOptions reversed = forward;
  reversed.tie_break = TieBreak::Reversed;
  EXPECT_EQ(run(a, t, forward), run(a, t, reversed));
}

}  // namespace
}  // namespace lola
