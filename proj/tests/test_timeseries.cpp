#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "test_support.hpp"

using namespace sectorflow;
using namespace testing_support;

namespace {

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return read_dataset(in);
}

ErrorCode parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kConfig;
}

}  // namespace

TEST(LoadDataset, ThreeRowsTwoSectors) {
  auto ds = parse("date,801010,801020\n2000-01-04,10,20\n2000-01-05,11,21\n2000-01-06,12,19\n");
  ASSERT_EQ(ds.sector_count(), 2u);
  EXPECT_EQ(ds.series[0].size(), 3u);
  EXPECT_EQ(ds.series[1].size(), 3u);
  EXPECT_EQ(ds.series[0].sector.short_code, "010");
  EXPECT_EQ(ds.series[1].closes[2], 19.0);
  EXPECT_EQ(ds.dropped_rows, 0u);
}

TEST(LoadDataset, MissingCellDropsRowEverywhere) {
  auto ds = parse("date,a01,b02\n2000-01-04,10,20\n2000-01-05,,21\n2000-01-06,12,NA\n2000-01-07,13,22\n");
  EXPECT_EQ(ds.series[0].size(), 2u);
  EXPECT_EQ(ds.series[1].size(), 2u);
  EXPECT_EQ(ds.dropped_rows, 2u);
  EXPECT_EQ(ds.series[0].dates, ds.series[1].dates);
  EXPECT_EQ(ds.series[1].dates[1], Date(2000, 1, 7));
}

TEST(LoadDataset, ErrorPaths) {
  EXPECT_EQ(parse_error(""), ErrorCode::kMalformedInput);
  EXPECT_EQ(parse_error("day,a,b\n2000-01-04,1,2\n2000-01-05,1,2\n"), ErrorCode::kMalformedInput);
  EXPECT_EQ(parse_error("date,a,a\n2000-01-04,1,2\n2000-01-05,1,2\n"), ErrorCode::kMalformedInput);
  EXPECT_EQ(parse_error("date,a,b\n2000-01-04,1,0\n2000-01-05,1,2\n"), ErrorCode::kMalformedInput);
  EXPECT_EQ(parse_error("date,a,b\n2000-01-04,1,-3\n2000-01-05,1,2\n"), ErrorCode::kMalformedInput);
  EXPECT_EQ(parse_error("date,a,b\n2000-01-05,1,2\n2000-01-04,1,2\n"), ErrorCode::kMalformedInput);
  EXPECT_EQ(parse_error("date,a,b\n2000-01-05,1,2\n2000-01-05,1,2\n"), ErrorCode::kMalformedInput);
  EXPECT_EQ(parse_error("date,a,b\n2000-01-04,1,2\n"), ErrorCode::kMalformedInput);
  EXPECT_EQ(parse_error("date,a,b\n2000-01-04,1,2\n2000-01-05,,2\n"), ErrorCode::kMalformedInput);
  EXPECT_EQ(parse_error("date,a,b\n04/01/2000,1,2\n2000-01-05,1,2\n"), ErrorCode::kMalformedInput);
  EXPECT_EQ(parse_error("date,a,b\n2000-02-30,1,2\n2000-03-01,1,2\n"), ErrorCode::kMalformedInput);
  EXPECT_EQ(parse_error("date,a,b\n2000-01-04,1\n2000-01-05,1,2\n"), ErrorCode::kMalformedInput);
}

TEST(LoadDataset, MissingFile) {
  try {
    load_dataset("/nonexistent/prices.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInputNotFound);
    EXPECT_NE(std::string(e.what()).find("input not found"), std::string::npos);
  }
}

TEST(LoadDataset, SectorNamesAndCrlf) {
  std::istringstream names("code,name\r\n801010,\"Agriculture, forestry\"\r\n");
  auto meta = read_sector_names(names);
  std::istringstream in("date,801010\r\n2000-01-04,1.5\r\n2000-01-05,1.6\r\n");
  auto ds = read_dataset(in, meta);
  EXPECT_EQ(ds.series[0].sector.name, "Agriculture, forestry");
  EXPECT_EQ(ds.series[0].closes[1], 1.6);
}

TEST(LoadDataset, FullSizeTableShape) {
  // Same shape as the 28-sector daily table: 4359 closing prices per sector.
  auto spec = synth::independent_dataset(28, 4358, 3);
  std::ostringstream out;
  write_dataset(out, synth::generate_dataset(spec));
  auto ds = parse(out.str());
  ASSERT_EQ(ds.sector_count(), 28u);
  for (const auto& s : ds.series) EXPECT_EQ(s.size(), 4359u);
}

TEST(LoadDataset, WriteReadRoundTripIsExact) {
  auto prices = synth::generate_dataset(synth::star_dataset(4, 1, 0.5, 300, 11));
  std::ostringstream out;
  write_dataset(out, prices);
  auto ds = parse(out.str());
  for (std::size_t i = 0; i < prices.size(); ++i) {
    EXPECT_EQ(ds.series[i].closes, prices[i].closes);
    EXPECT_EQ(ds.series[i].dates, prices[i].dates);
  }
}

TEST(LogReturns, ConstantPrices) {
  PriceSeries p{SectorMeta::from_code("x"), synth::business_days(Date(2020, 1, 1), 3), {5, 5, 5}};
  auto r = log_returns(p);
  EXPECT_EQ(r.values, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(r.dates.front(), p.dates[1]);
}

TEST(LogReturns, OneToE) {
  PriceSeries p{SectorMeta::from_code("x"), synth::business_days(Date(2020, 1, 1), 2),
                {1.0, std::numbers::e}};
  auto r = log_returns(p);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r.values[0], 1.0, 1e-15);
}

TEST(LogReturns, RejectsNonPositive) {
  PriceSeries p{SectorMeta::from_code("x"), synth::business_days(Date(2020, 1, 1), 3), {1, 0, 2}};
  EXPECT_THROW(log_returns(p), Error);
}

TEST(LogReturns, MatchesHighPrecisionOracle) {
  Rng rng(99);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> closes{100.0};
    for (int t = 1; t < 100; ++t) closes.push_back(closes.back() * std::exp(0.03 * rng.normal()));
    PriceSeries p{SectorMeta::from_code("x"), synth::business_days(Date(2020, 1, 1), 100), closes};
    auto r = log_returns(p);
    auto hp = oracle::hp_log_returns(closes);
    for (std::size_t t = 0; t < r.size(); ++t)
      EXPECT_NEAR(r.values[t], hp[t].convert_to<double>(), 1e-12);
  }
}

TEST(LogReturns, CumulativeSumRecoversPrices) {
  Rng rng(5);
  std::vector<double> closes{37.0};
  for (int t = 1; t < 500; ++t) closes.push_back(closes.back() * std::exp(0.02 * rng.normal()));
  PriceSeries p{SectorMeta::from_code("x"), synth::business_days(Date(2020, 1, 1), 500), closes};
  auto r = log_returns(p);
  double cum = 0.0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    cum += r.values[t];
    const double rebuilt = closes[0] * std::exp(cum);
    EXPECT_NEAR(rebuilt / closes[t + 1], 1.0, 1e-9);
  }
}

TEST(SummaryStats, AllZeroIsDegenerate) {
  std::vector<double> z(10, 0.0);
  try {
    summary_stats(z);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateSeries);
    EXPECT_STREQ(e.what(), "degenerate series");
  }
}

TEST(SummaryStats, TooShort) {
  std::vector<double> x{1, 2, 3};
  EXPECT_THROW(summary_stats(x), Error);
}

TEST(SummaryStats, MatchesHighPrecisionOracle) {
  Rng rng(17);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<double> x(200 + 10 * rep);
    for (auto& v : x) v = 0.02 * rng.normal() + (rng.bernoulli(0.05) ? 0.05 * rng.normal() : 0.0);
    auto s = summary_stats(x);
    auto o = oracle::hp_summary(x);
    EXPECT_NEAR(s.mean, o.mean, 1e-12);
    EXPECT_NEAR(s.std, o.std, 1e-12);
    EXPECT_NEAR(s.skewness, o.skewness, 1e-12);
    EXPECT_NEAR(s.kurtosis, o.kurtosis, 1e-12);
    EXPECT_NEAR(s.jb_statistic, o.jb, 1e-12 * std::max(1.0, o.jb));
    EXPECT_LE(s.min, s.mean);
    EXPECT_LE(s.mean, s.max);
    EXPECT_EQ(s.jb_reject_at_1pct, s.jb_statistic > 9.442);
  }
}

TEST(SummaryStats, PermutationInvariant) {
  Rng rng(3);
  std::vector<double> x(300);
  for (auto& v : x) v = rng.normal();
  auto a = summary_stats(x);
  rng.shuffle(std::span<double>(x));
  auto b = summary_stats(x);
  EXPECT_NEAR(a.mean, b.mean, 1e-14);
  EXPECT_NEAR(a.std, b.std, 1e-14);
  EXPECT_NEAR(a.skewness, b.skewness, 1e-12);
  EXPECT_NEAR(a.kurtosis, b.kurtosis, 1e-12);
  EXPECT_EQ(a.min, b.min);
  EXPECT_EQ(a.max, b.max);
}

TEST(SummaryStats, NormalSamplesLookNormal) {
  int rejections = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    std::vector<double> x(10000);
    for (auto& v : x) v = rng.normal();
    auto s = summary_stats(x);
    EXPECT_NEAR(s.kurtosis, 3.0, 0.2);
    rejections += s.jb_reject_at_1pct;
  }
  EXPECT_LE(rejections, 5);
}

TEST(Slice, FullRangeIsIdentity) {
  auto r = make_returns({0.1, 0.2, 0.3, 0.4});
  auto s = slice(r, {r.dates.front(), r.dates.back()});
  EXPECT_EQ(s.values, r.values);
  EXPECT_EQ(s.dates, r.dates);
  EXPECT_EQ(s.sector, r.sector);
}

TEST(Slice, ClosedInterval) {
  auto r = make_returns({0.1, 0.2, 0.3, 0.4});
  auto s = slice(r, {r.dates[1], r.dates[2]});
  EXPECT_EQ(s.values, (std::vector<double>{0.2, 0.3}));
}

TEST(Slice, DisjointIsEmptyResult) {
  auto r = make_returns({0.1, 0.2});
  try {
    slice(r, DateRange::calendar_year(1999));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyResult);
    EXPECT_NE(std::string(e.what()).find("empty result"), std::string::npos);
  }
}

TEST(Slice, CalendarYear) {
  auto prices = synth::generate_dataset(synth::demo28());
  auto r = log_returns(prices[0]);
  auto y2016 = slice(r, DateRange::calendar_year(2016));
  EXPECT_EQ(y2016.size(), 261u);
  EXPECT_EQ(y2016.dates.front(), Date(2016, 1, 1));
  EXPECT_EQ(y2016.dates.back(), Date(2016, 12, 30));
}

TEST(Date, ParseAndFormat) {
  EXPECT_EQ(Date::parse("2008-11-04"), Date(2008, 11, 4));
  EXPECT_EQ(Date(2007, 10, 16).iso(), "2007-10-16");
  EXPECT_THROW(Date::parse("2008-1-04"), Error);
  EXPECT_THROW(Date::parse("2008-13-01"), Error);
  EXPECT_THROW(Date::parse("20081104"), Error);
}
