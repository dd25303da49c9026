#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "sectorflow/error.hpp"
#include "sectorflow/timeseries.hpp"

namespace sectorflow {

inline constexpr int kDefaultBins = 15;

/// Equal-width bins over [x_min, x_max]. Bin k (1-based) covers
/// [x_min + (k-1) width, x_min + k width); the top bin is closed.
struct Partition {
  int q = kDefaultBins;
  double x_min = 0.0;
  double x_max = 0.0;
  double width = 0.0;

  double lower(int k) const { return x_min + (k - 1) * width; }
  double midpoint(int k) const { return x_min + (k - 0.5) * width; }

  int symbol(double x) const {
    if (!(x >= x_min && x <= x_max))
      throw Error(ErrorCode::kInvalidArgument,
                  "value " + csv::format_double(x) + " outside partition range");
    const double pos = std::floor((x - x_min) / width);
    return std::clamp(static_cast<int>(pos) + 1, 1, q);
  }
};

struct SymbolSeries {
  SectorMeta sector;
  Partition partition;
  std::vector<Date> dates;
  std::vector<int> symbols;

  std::size_t size() const { return symbols.size(); }
};

inline Partition make_partition(std::span<const double> values, int q = kDefaultBins) {
  if (q < 2) throw Error(ErrorCode::kInvalidArgument, "bin count q must be >= 2");
  if (values.size() < 2)
    throw Error(ErrorCode::kDegenerateSeries, "partition needs at least 2 values");
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  Partition p;
  p.q = q;
  p.x_min = *lo;
  p.x_max = *hi;
  p.width = (p.x_max - p.x_min) / q;
  if (!(p.width > 0.0) || !std::isfinite(p.width))
    throw Error(ErrorCode::kDegenerateSeries, "degenerate series: constant values");
  return p;
}

inline Partition make_partition(const ReturnSeries& r, int q = kDefaultBins) {
  try {
    return make_partition(std::span<const double>(r.values), q);
  } catch (const Error& e) {
    throw Error(e.code(), r.sector.code + ": " + e.what());
  }
}

inline std::vector<int> encode(std::span<const double> values, const Partition& p) {
  std::vector<int> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [&](double x) { return p.symbol(x); });
  return out;
}

inline SymbolSeries encode(const ReturnSeries& r, const Partition& p) {
  SymbolSeries s;
  s.sector = r.sector;
  s.partition = p;
  s.dates = r.dates;
  s.symbols = encode(std::span<const double>(r.values), p);
  return s;
}

/// Window-local symbolization: partition bounds come from `r` itself.
inline SymbolSeries symbolize(const ReturnSeries& r, int q = kDefaultBins) {
  return encode(r, make_partition(r, q));
}

}  // namespace sectorflow
