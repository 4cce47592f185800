#include <gtest/gtest.h>

#include "fixtures.hpp"

namespace lola {
namespace {

ValueType stream_type(const Analysis& a, const char* name) { return a.values.streams[a.spec->find(name)->value]; }

TEST(ValueTypes, MeetPrefersTheWiderNumericType) {
  EXPECT_EQ(vt_meet(ValueType::integer(32), ValueType::integer(64)), ValueType::integer(64));
  EXPECT_TRUE(vt_more_concrete(ValueType::integer(64), ValueType::integer(8)));
  EXPECT_EQ(vt_meet(ValueType::top(), ValueType::boolean()), ValueType::boolean());
  EXPECT_EQ(vt_meet(ValueType::boolean(), ValueType::string()), ValueType::bottom());
}

TEST(ValueTypes, OptionCollapses) {
  ValueType once = ValueType::option(ValueType::integer(64));
  EXPECT_EQ(ValueType::option(once), once);
  EXPECT_TRUE(ValueType::tuple({once}).contains_option());
}

TEST(ValueTypes, PrimitiveNames) {
  EXPECT_EQ(primitive_type_from_name("Int"), ValueType::integer(64));
  EXPECT_EQ(primitive_type_from_name("UInt8"), ValueType::uint(8));
  EXPECT_EQ(primitive_type_from_name("Float32"), ValueType::floating(32));
  EXPECT_EQ(primitive_type_from_name("Bool"), ValueType::boolean());
  EXPECT_FALSE(primitive_type_from_name("Integer").has_value());
}

TEST(ValueTypes, InfersFromExpressions) {
  Analysis a = analyze("input x: Float32\noutput y := x * 2.0\noutput z := y > 1.0\noutput w := (x, z)");
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(stream_type(a, "y"), ValueType::floating(32));
  EXPECT_EQ(stream_type(a, "z"), ValueType::boolean());
  EXPECT_EQ(stream_type(a, "w"), ValueType::tuple({ValueType::floating(32), ValueType::boolean()}));
}

TEST(ValueTypes, LiteralsDefaultToSixtyFourBits) {
  Analysis a = analyze("output a @1Hz := 1\noutput b @1Hz := 1.5");
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(stream_type(a, "a"), ValueType::integer(64));
  EXPECT_EQ(stream_type(a, "b"), ValueType::floating(64));
}

TEST(ValueTypes, UnconstrainedInputDefaultsWithWarning) {
  Analysis a = analyze("input x\noutput y @x := 1");
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(stream_type(a, "x"), ValueType::integer(64));
  bool warned = false;
  for (const auto& d : a.diagnostics) warned |= d.code == DiagCode::DefaultedType && d.severity == Severity::Warning;
  EXPECT_TRUE(warned);
}

TEST(ValueTypes, MismatchIsRejected) {
  Analysis a = analyze("input x: Int\ninput b: Bool\noutput y := x + b");
  EXPECT_FALSE(a.ok());
  EXPECT_TRUE(testing::has_code(a.diagnostics, DiagCode::TypeMismatch));
}

TEST(ValueTypes, DeclaredTypeMustMatch) {
  Analysis a = analyze("input x: Int\noutput y: Bool := x");
  EXPECT_TRUE(testing::has_code(a.diagnostics, DiagCode::TypeMismatch));
}

TEST(ValueTypes, OptionalValueNeedsDefault) {
  Analysis bad = analyze("input x: Int\noutput y := x.offset(by: -1) + 1");
  EXPECT_FALSE(bad.ok());
  Analysis good = analyze("input x: Int\noutput y := x.offset(by: -1).defaults(to: 0) + 1");
  EXPECT_TRUE(good.ok());
}

TEST(ValueTypes, ConditionsMustBeBoolean) {
  Analysis a = analyze("input x: Int\noutput y eval when x with 1");
  EXPECT_TRUE(testing::has_code(a.diagnostics, DiagCode::TypeMismatch));
}

TEST(ValueTypes, ParametersTakeSpawnTypes) {
  Analysis a = analyze("input x: UInt16\noutput y(p) spawn with x eval with p + x");
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(a.values.params[0][0], ValueType::uint(16));
  EXPECT_EQ(stream_type(a, "y"), ValueType::uint(16));
}

TEST(ValueTypes, ProjectionLiftsOverOption) {
  Analysis a = analyze("input p: (Int, Int)\noutput y @p := p.hold().0.defaults(to: 0)");
  EXPECT_TRUE(a.ok());
}

}  // namespace
}  // namespace lola
