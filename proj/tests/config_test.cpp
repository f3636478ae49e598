#include <gtest/gtest.h>

#include "torusbif/config.hpp"

using namespace torusbif;

namespace {

std::vector<std::string> errors_of(std::string_view text, const ConfigMap& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const config_errors& e) {
    return e.messages();
  }
  return {};
}

bool mentions(const std::vector<std::string>& errs, const std::string& what) {
  for (const auto& e : errs)
    if (e.find(what) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(ParseConfig, MinimalFillsDefaults) {
  const auto c = parse_config(R"(multiplier="fractional" s=0.5 p=2 N=128)");
  EXPECT_EQ(c.multiplier, "fractional");
  EXPECT_EQ(c.N, 128);
  EXPECT_EQ(c.format, "csv");
  EXPECT_EQ(c.continuation.ds0, ContinuationConfig{}.ds0);
  const auto ps = c.problem();
  EXPECT_EQ(ps.order, 128);
  EXPECT_GE(ps.grid, min_dealias_points(128, 2.0));
}

TEST(ParseConfig, SyntaxVariants) {
  const auto c = parse_config(
      "# ILW run\n"
      "multiplier = \"ilw\"   delta=2.5\n"
      "s=0.75 p=3  # trailing comment\n"
      "lambda-min=-4 lambda_max=6 sign=-\n");
  EXPECT_EQ(c.multiplier, "ilw");
  EXPECT_EQ(c.delta, 2.5);
  EXPECT_EQ(c.lambda_min, -4.0);
  EXPECT_EQ(c.sign, -1);
  EXPECT_EQ(c.p, 3.0);
}

TEST(ParseConfig, TableList) {
  const auto c = parse_config("multiplier=\"table\" N=4 table=[1, 1.1,\n 1.2, 1.3] m0=0.9 m1=1.35");
  EXPECT_NO_THROW(c.problem());
  EXPECT_NO_THROW(parse_config("multiplier=\"table\" N=2 table=[1, 1.5]"));
  EXPECT_EQ(c.table, (std::vector<double>{1.0, 1.1, 1.2, 1.3}));
  EXPECT_NO_THROW(c.problem());
}

TEST(ParseConfig, FlagsOverrideFile) {
  const auto c = parse_config("s=0.5 N=64", {{"N", "32"}, {"lambda-max", "7"}});
  EXPECT_EQ(c.N, 32);
  EXPECT_EQ(c.lambda_max, 7.0);
}

TEST(ParseConfig, RejectsPaperRanges) {
  EXPECT_TRUE(mentions(errors_of("s=0.3"), "s: must satisfy s >= 1/2"));
  EXPECT_TRUE(mentions(errors_of("p=1.5"), "p: must satisfy p >= 2"));
}

TEST(ParseConfig, ReportsEverythingAtOnce) {
  const auto errs = errors_of("s=0.3 p=1.5 N=abc format=xml bogus=1 ds0=5");
  EXPECT_GE(errs.size(), 6u);
  EXPECT_TRUE(mentions(errs, "s:"));
  EXPECT_TRUE(mentions(errs, "p:"));
  EXPECT_TRUE(mentions(errs, "N: 'abc'"));
  EXPECT_TRUE(mentions(errs, "format"));
  EXPECT_TRUE(mentions(errs, "unknown key 'bogus'"));
  EXPECT_TRUE(mentions(errs, "ds0"));
}

TEST(ParseConfig, TableViolatingMonotonicityIsRejected) {
  const auto errs = errors_of("multiplier=\"table\" N=4 table=[1, 1.2, 1.1, 1.3]");
  EXPECT_TRUE(mentions(errs, "M2")) << (errs.empty() ? "" : errs.front());
}

TEST(ParseConfig, TableTooShortAndCoarseGrid) {
  EXPECT_TRUE(mentions(errors_of("multiplier=\"table\" N=8 table=[1,1.1]"), "TableOutOfRange"));
  EXPECT_TRUE(mentions(errors_of("N=64 M=100"), "GridTooCoarse"));
}

TEST(ParseConfig, SyntaxErrors) {
  EXPECT_TRUE(mentions(errors_of("N=3 N=4"), "duplicate key"));
  EXPECT_TRUE(mentions(errors_of("multiplier=\"ilw"), "unterminated"));
  EXPECT_TRUE(mentions(errors_of("justaword"), "expected key=value"));
  EXPECT_TRUE(mentions(errors_of("table=1,2"), "list"));
}
