#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lola/bench_gen.hpp"

namespace lola {
namespace {

TEST(BenchGen, KindNames) {
  EXPECT_EQ(bench_kind_from_name("sync"), BenchKind::SyncChain);
  EXPECT_EQ(bench_kind_from_name("param"), BenchKind::ParamChain);
  EXPECT_EQ(bench_kind_from_name("conjunct"), BenchKind::ConjunctChain);
  EXPECT_FALSE(bench_kind_from_name("other").has_value());
  for (BenchKind k : {BenchKind::SyncChain, BenchKind::ParamChain, BenchKind::ConjunctChain}) {
    EXPECT_EQ(bench_kind_from_name(bench_kind_name(k)), k);
  }
}

TEST(BenchGen, SyncChainOfThree) {
  EXPECT_EQ(generate(BenchKind::SyncChain, 3),
            "input bench: Int\noutput s1 := s2\noutput s2 := s3\noutput s3 := bench\n");
}

TEST(BenchGen, ParamChainOfThree) {
  EXPECT_EQ(generate(BenchKind::ParamChain, 3),
            "input bench: Int\n"
            "output s1(p1: Int, p2: Int, p3: Int)\n    spawn with (bench, bench, bench)\n    eval with s2(p1, p2)\n"
            "output s2(p1: Int, p2: Int)\n    spawn with (bench, bench)\n    eval with s3(p1)\n"
            "output s3(p1: Int)\n    spawn with (bench)\n    eval with bench\n");
}

TEST(BenchGen, ConjunctChainOfThree) {
  EXPECT_EQ(generate(BenchKind::ConjunctChain, 3),
            "input i1: Bool\ninput i2: Bool\ninput i3: Bool\n"
            "output s1\n    eval when i1 && i2 && i3 with s2\n"
            "output s2\n    eval when i1 && i2 with s3\n"
            "output s3\n    eval when i1 with i1\n");
}

TEST(BenchGen, ChainsAreAccepted) {
  for (BenchKind k : {BenchKind::SyncChain, BenchKind::ParamChain, BenchKind::ConjunctChain}) {
    for (std::size_t n : {1, 2, 7, 20}) {
      Analysis a = analyze(generate(k, n));
      EXPECT_TRUE(a.ok()) << bench_kind_name(k) << " " << n;
      EXPECT_EQ(a.spec->outputs.size(), n);
    }
  }
}

TEST(BenchGen, RandomSpecsAreDeterministicAndAccepted) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::string source = random_welltyped(seed, 6);
    EXPECT_EQ(source, random_welltyped(seed, 6));
    Analysis a = analyze(source);
    EXPECT_TRUE(a.ok()) << source;
    EXPECT_LE(a.spec->outputs.size(), 6u);
  }
  EXPECT_NE(random_welltyped(1, 6), random_welltyped(2, 6));
}

TEST(BenchGen, RandomTracesAreMonotoneAndNonEmpty) {
  Analysis a = analyze(random_welltyped(11, 5));
  ASSERT_TRUE(a.ok());
  Trace t = random_trace(*a.spec, a.values, 3, 50);
  ASSERT_EQ(t.size(), 50u);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_FALSE(t[i].values.empty());
    if (i > 0) {
      Rational gap = t[i].time - t[i - 1].time;
      EXPECT_TRUE(gap == Rational(1, 4) || gap == Rational(1, 2) || gap == Rational(1));
    }
  }
  EXPECT_EQ(t, random_trace(*a.spec, a.values, 3, 50));
}

}  // namespace
}  // namespace lola
