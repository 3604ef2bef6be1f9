#include "sfqsim/diagnostics.hpp"
#include "sfqsim/time.hpp"

#include <gtest/gtest.h>

using namespace sfqsim;

TEST(Time, ParsesEveryUnit) {
  EXPECT_EQ(parse_time("17fs").count(), 17);
  EXPECT_EQ(parse_time("5ps").count(), 5000);
  EXPECT_EQ(parse_time("2ns").count(), 2000000);
  EXPECT_EQ(parse_time("1us").count(), 1000000000);
  EXPECT_EQ(parse_time("  12.5 ps ").count(), 12500);
}

TEST(Time, BareNumberUsesDefaultUnit) {
  EXPECT_EQ(parse_time("40").count(), 40);
  EXPECT_EQ(parse_time("40", "ps").count(), 40000);
}

TEST(Time, NegativeValues) {
  EXPECT_EQ(parse_time("-3.25ps").count(), -3250);
}

TEST(Time, RejectsSubFemtosecondAndGarbage) {
  EXPECT_THROW(parse_time("0.0005ps"), Error);
  EXPECT_THROW(parse_time("1.5fs"), Error);
  EXPECT_THROW(parse_time("ps"), Error);
  EXPECT_THROW(parse_time("5 parsecs"), Error);
  EXPECT_THROW(parse_time("1e3ps"), Error);
  EXPECT_THROW(parse_time(""), Error);
}

TEST(Time, TrailingZerosBeyondFemtosecondAreExact) {
  EXPECT_EQ(parse_time("0.001000ps").count(), 1);
}

TEST(Time, UnitScale) {
  EXPECT_EQ(unit_scale_fs("ps"), 1000);
  EXPECT_FALSE(unit_scale_fs("ms").has_value());
}

TEST(Time, DecimalConversion) {
  EXPECT_EQ(decimal_to_fs("0.5", 1000), 500);
  EXPECT_EQ(decimal_to_fs(".5", 1000), 500);
  EXPECT_FALSE(decimal_to_fs("0.5", 1).has_value());
  EXPECT_FALSE(decimal_to_fs("1.2.3", 1000).has_value());
  EXPECT_FALSE(decimal_to_fs("99999999999999999999", 1).has_value());
}

TEST(Time, FormatDecimalIsExactAndMinimal) {
  EXPECT_EQ(format_decimal(8000, 1000), "8");
  EXPECT_EQ(format_decimal(500, 1000), "0.5");
  EXPECT_EQ(format_decimal(12250, 1000), "12.25");
  EXPECT_EQ(format_decimal(-1, 1000), "-0.001");
  EXPECT_EQ(format_decimal(7, 1), "7");
}

TEST(Time, FormatDecimalRoundTripsThroughParse) {
  for (std::int64_t v : {0LL, 1LL, 999LL, 1000LL, 123456789LL, -4200LL}) {
    const std::string text = format_decimal(v, 1000) + "ps";
    EXPECT_EQ(parse_time(text).count(), v) << text;
  }
}

TEST(Time, FormatTimePicksReadableUnit) {
  EXPECT_EQ(format_time(SimTime::fs(17)), "17fs");
  EXPECT_EQ(format_time(SimTime::ps(8)), "8ps");
  EXPECT_EQ(format_time(SimTime::fs(2500)), "2.5ps");
  EXPECT_EQ(format_time(SimTime::ns(3)), "3ns");
  EXPECT_EQ(format_time(SimTime{}), "0fs");
}

TEST(Time, Arithmetic) {
  SimTime t = SimTime::ps(3);
  t += SimTime::fs(5);
  EXPECT_EQ(t.count(), 3005);
  EXPECT_EQ((t * 2).count(), 6010);
  EXPECT_LT(-t, SimTime{});
  EXPECT_EQ(SimTime::max().count(), std::numeric_limits<std::int64_t>::max());
}
