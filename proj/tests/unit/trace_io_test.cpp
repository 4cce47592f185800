#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "lola/trace_io.hpp"
#include "json.hpp"

namespace lola {
namespace {

class TraceIo : public ::testing::Test {
 protected:
  void SetUp() override {
    analysis_ = analyze("input a: Int\ninput b: Float\ninput s: String\ninput t: (Int, Bool)\noutput o := a");
    ASSERT_TRUE(analysis_.spec);
  }

  Trace read(const std::string& text) {
    std::istringstream in(text);
    return read_csv_trace(in, *analysis_.spec, analysis_.values.streams);
  }

  TraceErrorKind failure(const std::string& text) {
    try {
      read(text);
    } catch (const TraceError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "no error for " << text;
    return TraceErrorKind::Io;
  }

  Analysis analysis_;
};

TEST_F(TraceIo, ReadsValuesAndGaps) {
  Trace t = read("time,a,b,s,t\n0.5,1,,\"x, y\",\"(2,true)\"\n4/3,,2.5,,\n");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].time, Rational(1, 2));
  ASSERT_EQ(t[0].values.size(), 3u);
  EXPECT_EQ(t[0].values[0], (std::pair<std::uint32_t, Value>{0, Value(std::int64_t{1})}));
  EXPECT_EQ(t[0].values[1].second, Value("x, y"));
  EXPECT_EQ(t[0].values[2].second, Value(Tuple{Value(std::int64_t{2}), Value(true)}));
  EXPECT_EQ(t[1].time, Rational(4, 3));
  EXPECT_EQ(t[1].values, (std::vector<std::pair<std::uint32_t, Value>>{{1, Value(2.5)}}));
}

TEST_F(TraceIo, InputColumnsMayBeOmitted) {
  Trace t = read("time,b\n2,1.0\n");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].values[0].first, 1u);
}

TEST_F(TraceIo, WriteThenReadIsIdentity) {
  Trace original = read("time,a,b,s,t\n0,1,0.25,\"q\"\"uote\",\"(1,false)\"\n1.5,-3,,,\n7/3,,1e3,\"\",\n");
  std::ostringstream out;
  write_csv_trace(out, original, *analysis_.spec);
  EXPECT_EQ(read(out.str()), original);
}

TEST_F(TraceIo, ErrorKinds) {
  EXPECT_EQ(failure("a,b\n1,2\n"), TraceErrorKind::MissingTimeColumn);
  EXPECT_EQ(failure("time,zzz\n1,2\n"), TraceErrorKind::UnknownColumn);
  EXPECT_EQ(failure("time,a\n2,1\n1,1\n"), TraceErrorKind::NonMonotoneTime);
  EXPECT_EQ(failure("time,a\n1,x\n"), TraceErrorKind::ValueParseError);
  EXPECT_EQ(failure("time,a\nsoon,1\n"), TraceErrorKind::ValueParseError);
  EXPECT_EQ(failure("a,time\n1,2\n"), TraceErrorKind::MissingTimeColumn);
}

TEST_F(TraceIo, ErrorsCarryRowAndColumn) {
  try {
    read("time,a\n1,1\n2,oops\n");
    FAIL();
  } catch (const TraceError& e) {
    EXPECT_EQ(e.row(), 2u);
    EXPECT_EQ(e.column(), 2u);
  }
}

TEST_F(TraceIo, MissingFileIsIoError) {
  try {
    read_csv_trace(std::filesystem::path("/nonexistent/trace.csv"), *analysis_.spec, analysis_.values.streams);
    FAIL();
  } catch (const TraceError& e) {
    EXPECT_EQ(e.kind(), TraceErrorKind::Io);
  }
}

MonitorReport sample_report() {
  MonitorReport r;
  r.stream_names = {"x", "alarm"};
  r.verdicts = {{Rational(1, 3), StreamId{1}, {Value(std::int64_t{4}), Value("k")}, Value("too high")}};
  r.dump = r.verdicts;
  return r;
}

TEST(Report, CsvHasHeaderAndQuotedParams) {
  std::ostringstream out;
  write_report(out, sample_report(), ReportFormat::Csv);
  EXPECT_EQ(out.str(), "time,stream,params,value\n1/3,alarm,\"[4,k]\",too high\n");
}

TEST(Report, JsonRecords) {
  std::ostringstream out;
  write_report(out, sample_report(), ReportFormat::Json, true);
  auto j = nlohmann::json::parse(out.str());
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["stream"], "alarm");
  EXPECT_EQ(j[0]["time_exact"], "1/3");
  EXPECT_NEAR(j[0]["time"].get<double>(), 1.0 / 3.0, 1e-12);
  EXPECT_EQ(j[0]["params"].size(), 2u);
}

TEST(Report, CsvFieldQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

}  // namespace
}  // namespace lola
