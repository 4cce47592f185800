#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lola/parser.hpp"

namespace lola {
namespace {

Specification core(const std::string& source) {
  ParseResult p = parse(source);
  EXPECT_TRUE(p.ok()) << source;
  DesugarResult d = desugar(p.spec);
  EXPECT_TRUE(d.ok()) << source;
  return d.spec ? *d.spec : Specification{};
}

TEST(Desugar, StreamIdsPlaceInputsFirst) {
  Specification s = core("output a := b\ninput b: Int\noutput c := a");
  ASSERT_EQ(s.stream_count(), 3u);
  EXPECT_EQ(s.find("b")->value, 0u);
  EXPECT_EQ(s.find("a")->value, 1u);
  EXPECT_EQ(s.find("c")->value, 2u);
  EXPECT_TRUE(s.is_input(*s.find("b")));
}

TEST(Desugar, FillsDefaultClauses) {
  Specification s = core("input x: Int\noutput y := x");
  const OutputStream& y = s.outputs[0];
  EXPECT_FALSE(y.is_spawned());
  EXPECT_FALSE(y.closes());
  EXPECT_TRUE(y.spawn.when.is_literal(true));
  EXPECT_TRUE(y.eval.when.is_literal(true));
  ASSERT_TRUE(y.spawn.with.has_value());
  EXPECT_EQ(y.spawn.with->kind, ExprKind::Tuple);
  EXPECT_TRUE(y.spawn.with->args.empty());
}

TEST(Desugar, LastAndHoldBecomeCoreAccesses) {
  Specification s = core("input x: Int\noutput y := x.last(or: 0) + x.hold(or: 1)");
  const Expression& e = *s.outputs[0].eval.with;
  ASSERT_EQ(e.kind, ExprKind::Function);
  ASSERT_EQ(e.args[0].kind, ExprKind::Default);
  EXPECT_EQ(e.args[0].args[0].kind, ExprKind::Offset);
  EXPECT_EQ(e.args[0].args[0].offset, 1u);
  ASSERT_EQ(e.args[1].kind, ExprKind::Default);
  EXPECT_EQ(e.args[1].args[0].kind, ExprKind::Hold);
}

TEST(Desugar, ParametersResolveToIndices) {
  Specification s = core("input x: Int\noutput y(p: Int, q: Int) spawn with (x, x) eval with q - p");
  const Expression& e = *s.outputs[0].eval.with;
  EXPECT_EQ(e.args[0].kind, ExprKind::Parameter);
  EXPECT_EQ(e.args[0].index, 1u);
  EXPECT_EQ(e.args[1].index, 0u);
}

TEST(Desugar, ExpressionIdsAreDense) {
  Specification s = core(testing::read_file(testing::spec_dir() / "corpus" / "intruder.lola"));
  std::vector<bool> seen(s.expression_count, false);
  auto mark = [&](const Expression& e) {
    ASSERT_LT(e.id, s.expression_count);
    EXPECT_FALSE(seen[e.id]);
    seen[e.id] = true;
  };
  for (const auto& o : s.outputs) {
    for (const Declaration* d : {&o.spawn, &o.eval, &o.close}) {
      visit_expressions(d->when, mark);
      if (d->with) visit_expressions(*d->with, mark);
    }
  }
}

TEST(Desugar, UnknownStreamIsReported) {
  ParseResult p = parse("output a := nothing");
  DesugarResult d = desugar(p.spec);
  EXPECT_FALSE(d.ok());
  EXPECT_TRUE(testing::has_code(d.diagnostics, DiagCode::UnknownStream));
}

TEST(Desugar, DuplicateStreamIsReported) {
  ParseResult p = parse("input a: Int\noutput a := 1");
  DesugarResult d = desugar(p.spec);
  EXPECT_TRUE(testing::has_code(d.diagnostics, DiagCode::DuplicateStream));
}

TEST(Desugar, WrongArityIsReported) {
  ParseResult p = parse("input x: Int\noutput a(p: Int) spawn with x eval with p\noutput b := a(1, 2)");
  DesugarResult d = desugar(p.spec);
  EXPECT_TRUE(testing::has_code(d.diagnostics, DiagCode::ArityMismatch));
}

TEST(Desugar, CoreFormRoundTripsThroughSurface) {
  const char* names[] = {"intruder", "waypoint", "watchdog", "rcc", "ffd", "geofence"};
  for (const char* name : names) {
    Specification s = core(testing::read_file(testing::spec_dir() / "corpus" / (std::string(name) + ".lola")));
    DesugarResult again = desugar(to_surface(s));
    ASSERT_TRUE(again.spec) << name;
    EXPECT_TRUE(structurally_equal(s, *again.spec)) << name;
    EXPECT_TRUE(validate_arities(s).empty()) << name;
  }
}

TEST(Desugar, CanonicalKeySortsConjuncts) {
  Specification s = core("input a: Bool\ninput b: Bool\noutput x := a && b\noutput y := b && a");
  EXPECT_NE(structural_key(*s.outputs[0].eval.with), structural_key(*s.outputs[1].eval.with));
  EXPECT_EQ(structural_key(*s.outputs[0].eval.with, true), structural_key(*s.outputs[1].eval.with, true));
}

}  // namespace
}  // namespace lola
