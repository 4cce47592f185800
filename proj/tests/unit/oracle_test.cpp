#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lola/bench_gen.hpp"
#include "oracle.hpp"

namespace lola {
namespace {

Analysis must_analyze(const std::string& source) {
  Analysis a = analyze(source);
  EXPECT_TRUE(a.ok()) << source;
  return a;
}

TEST(Oracle, CountsEventsInWindow) {
  Analysis a = must_analyze("input x: Int\noutput c @1Hz := x.aggregate(over: 2s, using: count)\n");
  Trace trace{{Rational(1, 2), {{0, Value(std::int64_t{1})}}}, {Rational(3, 2), {{0, Value(std::int64_t{2})}}}};
  auto r = oracle::oracle_run(*a.spec, a.values, a.pacing, trace, 100, Rational(3));
  ASSERT_EQ(r.report.dump.size(), 4u);
  EXPECT_EQ(r.report.dump[0].value, Value(std::uint64_t{0}));
  EXPECT_EQ(r.report.dump[1].value, Value(std::uint64_t{1}));
  EXPECT_EQ(r.report.dump[2].value, Value(std::uint64_t{2}));
  EXPECT_EQ(r.report.dump[3].value, Value(std::uint64_t{1}));
}

TEST(Oracle, SelfReferenceWithoutDelayHasManyModels) {
  Analysis a = analyze("input x: Int\noutput a @x := a\n");
  ASSERT_TRUE(a.spec);
  Trace trace{{Rational(0), {{0, Value(std::int64_t{1})}}}};
  try {
    oracle::oracle_run(*a.spec, a.values, a.pacing, trace, 10);
    FAIL() << "expected an error";
  } catch (const oracle::OracleError& e) {
    EXPECT_EQ(e.kind(), oracle::OracleErrorKind::MultipleModels);
  }
}

TEST(Oracle, NegatedSelfReferenceHasNoModel) {
  Analysis a = analyze("input x: Int\noutput a: Bool @x := !a\n");
  ASSERT_TRUE(a.spec);
  Trace trace{{Rational(0), {{0, Value(std::int64_t{1})}}}};
  try {
    oracle::oracle_run(*a.spec, a.values, a.pacing, trace, 10);
    FAIL() << "expected an error";
  } catch (const oracle::OracleError& e) {
    EXPECT_EQ(e.kind(), oracle::OracleErrorKind::NoModel);
  }
}

TEST(Oracle, AgreesWithMonitorOnGeneratedSpecs) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    std::string source = random_welltyped(seed, 4);
    Analysis a = must_analyze(source);
    if (!a.ok()) continue;
    Trace trace = random_trace(*a.spec, a.values, seed * 7, 12);
    auto expected = oracle::oracle_run(*a.spec, a.values, a.pacing, trace, 20);
    MonitorOptions options;
    options.dump = true;
    options.end_time = expected.last_time;
    MonitorReport actual = expected.last_time ? run(a, trace, options) : MonitorReport{};
    if (!expected.last_time) actual.stream_names = expected.report.stream_names;
    EXPECT_EQ(actual, expected.report) << source;
  }
}

}  // namespace
}  // namespace lola
