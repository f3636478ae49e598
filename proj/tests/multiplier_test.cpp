#include <gtest/gtest.h>

#include <cmath>

#include "torusbif/multiplier.hpp"

using namespace torusbif;

namespace {

// mpmath, 30 digits.
constexpr double coth2_minus_half = 0.537314720727548095877809764768;
constexpr double coth1_minus_one = 0.313035285499331303636161246931;

bool has_violation(const ValidationReport& r, const std::string& h, long n) {
  for (const auto& v : r)
    if (v.hypothesis == h && v.n == n) return true;
  return false;
}

}  // namespace

TEST(Multiplier, FractionalSymbolIsOne) {
  const auto spec = make_fractional(0.5);
  EXPECT_EQ(symbol(spec, 7), 1.0);
  EXPECT_EQ(symbol(spec, -7), 1.0);
}

TEST(Multiplier, IlwSymbol) {
  const auto spec = make_ilw(0.5, 1.0);
  EXPECT_EQ(symbol(spec, 0), 0.0);
  EXPECT_NEAR(symbol(spec, 2), coth2_minus_half, 1e-15);
  EXPECT_NEAR(symbol(spec, 1), coth1_minus_one, 1e-15);
  EXPECT_LT(std::abs(symbol(spec, 10000) - 1.0), 1e-3);
}

TEST(Multiplier, IlwTendsToOne) {
  // coth(x) - 1/x = 1 - 1/x + O(e^{-2x}); at n = 1e4 the deviation is exactly 1e-4.
  const auto spec = make_ilw(0.5, 1.0);
  EXPECT_NEAR(symbol(spec, 10000), 1.0 - 1e-4, 1e-15);
  // The decay to 1 is algebraic: 1e-6 is reached only at delta n = 1e6.
  EXPECT_LT(std::abs(symbol(spec, 1000000) - 1.0), 1e-6 + 1e-15);
}

TEST(Multiplier, IlwSmallArgumentSeriesIsContinuous) {
  const double below = detail::coth_minus_inverse(0.999999e-3);
  const double above = detail::coth_minus_inverse(1.000001e-3);
  EXPECT_NEAR(below, above, 1e-9);
  EXPECT_NEAR(detail::coth_minus_inverse(1e-8), 1e-8 / 3.0, 1e-22);
}

TEST(Multiplier, OperatorSymbol) {
  EXPECT_DOUBLE_EQ(operator_symbol(make_fractional(0.5), 3), 3.0);
  EXPECT_DOUBLE_EQ(operator_symbol(make_fractional(1.0), 2), 4.0);
  EXPECT_EQ(operator_symbol(make_ilw(0.75, 2.0), 0), 0.0);
  EXPECT_EQ(operator_symbol(make_fractional(1.0), 0), 0.0);
}

TEST(Multiplier, OperatorSymbolEvenAndIncreasing) {
  for (const auto& spec : {make_fractional(0.5), make_fractional(0.75), make_ilw(0.5, 1.0), make_ilw(1.0, 0.2)}) {
    double prev = 0.0;
    for (long n = 1; n <= 200; ++n) {
      EXPECT_EQ(operator_symbol(spec, n), operator_symbol(spec, -n));
      EXPECT_GT(operator_symbol(spec, n), prev);
      prev = operator_symbol(spec, n);
    }
  }
}

TEST(Multiplier, TableLookupAndRange) {
  const auto spec = make_table(0.5, {0.5, 0.6, 0.7}, 0.4, 0.8);
  EXPECT_EQ(symbol(spec, 2), 0.6);
  EXPECT_EQ(symbol(spec, -3), 0.7);
  try {
    symbol(spec, 4);
    FAIL() << "expected TableOutOfRange";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::table_out_of_range);
  }
}

TEST(Multiplier, RejectsSmallExponent) {
  EXPECT_THROW(make_fractional(0.3), error);
  EXPECT_THROW(make_ilw(0.49, 1.0), error);
  EXPECT_THROW(make_ilw(0.5, 0.0), error);
}

TEST(Validate, FractionalIsClean) { EXPECT_TRUE(validate(make_fractional(0.5), 100).empty()); }

TEST(Validate, IlwLowerBound) {
  EXPECT_TRUE(validate(make_ilw(0.5, 1.0, 0.3, 1.0), 100).empty());
  const auto report = validate(make_ilw(0.5, 1.0, 0.32, 1.0), 100);
  EXPECT_TRUE(has_violation(report, "M3", 1));
  EXPECT_FALSE(has_violation(report, "M3", 5));
}

TEST(Validate, IlwDefaultsAreValid) { EXPECT_TRUE(validate(make_ilw(0.5, 1.0), 500).empty()); }

TEST(Validate, Monotonicity) {
  const auto report = validate(make_table(0.5, {2.0, 1.0}, 0.5, 3.0), 2);
  EXPECT_TRUE(has_violation(report, "M2", 2));
  EXPECT_EQ(report.size(), 1u);
}

TEST(Validate, TableRangeIsReported) {
  const auto report = validate(make_table(0.5, {1.0, 1.0}, 0.5, 3.0), 5);
  EXPECT_TRUE(has_violation(report, "range", 3));
}

TEST(Validate, ThrowingVariant) {
  EXPECT_NO_THROW(validate_or_throw(make_fractional(1.0), 10));
  EXPECT_THROW(validate_or_throw(make_table(0.5, {2.0, 1.0}, 0.5, 3.0), 2), error);
}
