#include <gtest/gtest.h>

#include <numeric>

#include "test_support.hpp"

using namespace sectorflow;
using namespace testing_support;

TEST(Partition, UnitIntervalTwoBins) {
  std::vector<double> v{0.0, 0.3, 1.0};
  auto p = make_partition(v, 2);
  EXPECT_EQ(p.width, 0.5);
  EXPECT_EQ(p.lower(1), 0.0);
  EXPECT_EQ(p.lower(2), 0.5);
  EXPECT_EQ(p.symbol(0.4999), 1);
  EXPECT_EQ(p.symbol(0.5), 2);
  EXPECT_EQ(p.symbol(1.0), 2);
}

TEST(Partition, PriceLimitRangeFifteenBins) {
  std::vector<double> v{-0.1, 0.0, 0.1};
  auto p = make_partition(v, 15);
  EXPECT_DOUBLE_EQ(p.width, 0.2 / 15);
  EXPECT_EQ(p.q, 15);
}

TEST(Partition, RejectsDegenerateInput) {
  std::vector<double> c(5, 0.01);
  EXPECT_THROW(make_partition(c, 15), Error);
  std::vector<double> v{0.0, 1.0};
  EXPECT_THROW(make_partition(v, 1), Error);
  EXPECT_THROW(make_partition(std::vector<double>{1.0}, 3), Error);
}

TEST(Encode, TopBinIsClosed) {
  std::vector<double> v{0.0, 0.5, 1.0};
  EXPECT_EQ(encode(v, make_partition(v, 2)), (std::vector<int>{1, 2, 2}));
}

TEST(Encode, FloorFormula) {
  // (x - 0) / 0.25 = 0, 0.96, 1.04, 4 -> bins 1, 1, 2, 4 (4 clamps to the top bin)
  std::vector<double> v{0.0, 0.24, 0.26, 1.0};
  EXPECT_EQ(encode(v, make_partition(v, 4)), (std::vector<int>{1, 1, 2, 4}));
}

TEST(Encode, OutOfRangeValueIsAnError) {
  std::vector<double> v{0.0, 1.0};
  auto p = make_partition(v, 4);
  EXPECT_THROW(p.symbol(1.0001), Error);
  EXPECT_THROW(p.symbol(-0.0001), Error);
}

TEST(Encode, SymbolSeriesInvariants) {
  Rng rng(8);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> v(100 + rep);
    for (auto& x : v) x = rng.normal();
    const int q = 2 + rep % 19;
    auto r = make_returns(v);
    auto s = symbolize(r, q);
    EXPECT_EQ(s.size(), r.size());
    EXPECT_EQ(s.dates, r.dates);
    EXPECT_EQ(*std::min_element(s.symbols.begin(), s.symbols.end()), 1);
    EXPECT_EQ(*std::max_element(s.symbols.begin(), s.symbols.end()), q);

    std::vector<std::size_t> hist(q + 1, 0);
    for (int k : s.symbols) ++hist[k];
    EXPECT_EQ(std::accumulate(hist.begin(), hist.end(), std::size_t{0}), v.size());

    // Quantization bound: bin midpoints are within one width of the value.
    for (std::size_t t = 0; t < v.size(); ++t)
      EXPECT_LT(std::abs(s.partition.midpoint(s.symbols[t]) - v[t]), s.partition.width);
  }
}

TEST(Encode, Monotone) {
  Rng rng(21);
  std::vector<double> v(400);
  for (auto& x : v) x = rng.normal();
  auto p = make_partition(v, 15);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  auto sym = encode(sorted, p);
  EXPECT_TRUE(std::is_sorted(sym.begin(), sym.end()));
}

TEST(Encode, AffineInvariance) {
  // Integer-valued data with power-of-two scales keeps every step exact, so
  // the comparison can be exact too.
  Rng rng(4);
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<double> v(200);
    for (auto& x : v) x = static_cast<double>(static_cast<int>(rng.below(2001)) - 1000);
    const double a = std::ldexp(1.0, static_cast<int>(rng.below(9)) - 4);
    const double b = static_cast<double>(static_cast<int>(rng.below(201)) - 100) * a;
    std::vector<double> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = a * v[i] + b;
    const int q = 2 + static_cast<int>(rng.below(20));
    EXPECT_EQ(encode(v, make_partition(v, q)), encode(w, make_partition(w, q)));
  }
}

TEST(Encode, GlobalPartitionCoversSubWindows) {
  Rng rng(2);
  std::vector<double> v(300);
  for (auto& x : v) x = rng.normal();
  auto r = make_returns(v);
  auto global = make_partition(r, 10);
  auto sub = slice_index(r, 50, 120);
  auto s = encode(sub, global);
  EXPECT_EQ(s.size(), 70u);
  for (int k : s.symbols) {
    EXPECT_GE(k, 1);
    EXPECT_LE(k, 10);
  }
}
