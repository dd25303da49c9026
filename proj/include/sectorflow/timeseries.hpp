#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sectorflow/csv.hpp"
#include "sectorflow/date.hpp"
#include "sectorflow/error.hpp"

namespace sectorflow {

struct SectorMeta {
  std::string code;
  std::string short_code;
  std::string name;

  /// Short codes are the last three characters of the code.
  static SectorMeta from_code(std::string code, std::string name = {}) {
    SectorMeta m;
    m.short_code = code.size() > 3 ? code.substr(code.size() - 3) : code;
    m.code = std::move(code);
    m.name = name.empty() ? m.code : std::move(name);
    return m;
  }

  friend bool operator==(const SectorMeta&, const SectorMeta&) = default;
};

struct PriceSeries {
  SectorMeta sector;
  std::vector<Date> dates;
  std::vector<double> closes;

  std::size_t size() const { return closes.size(); }

  void validate() const {
    if (dates.size() != closes.size())
      throw Error(ErrorCode::kMalformedInput, sector.code + ": dates/closes length mismatch");
    if (closes.size() < 2)
      throw Error(ErrorCode::kMalformedInput, sector.code + ": fewer than 2 prices");
    for (std::size_t i = 0; i < closes.size(); ++i) {
      if (!(closes[i] > 0.0) || !std::isfinite(closes[i]))
        throw Error(ErrorCode::kMalformedInput,
                    sector.code + ": non-positive price on " + dates[i].iso());
      if (i > 0 && !(dates[i - 1] < dates[i]))
        throw Error(ErrorCode::kMalformedInput,
                    sector.code + ": dates not strictly increasing at " + dates[i].iso());
    }
  }
};

struct ReturnSeries {
  SectorMeta sector;
  std::vector<Date> dates;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

struct SummaryStats {
  double mean = 0.0;
  double max = 0.0;
  double min = 0.0;
  double std = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
  double jb_statistic = 0.0;
  bool jb_reject_at_1pct = false;
};

/// Jarque-Bera critical value used for the 1% test.
inline constexpr double kJarqueBeraCritical1pct = 9.442;

/// Price table sharing one date axis across sectors.
struct Dataset {
  std::vector<PriceSeries> series;
  /// Rows discarded because at least one sector had no price that day.
  std::size_t dropped_rows = 0;

  std::size_t sector_count() const { return series.size(); }
  const std::vector<Date>& dates() const { return series.front().dates; }
};

namespace detail {

inline bool is_missing_cell(std::string_view s) {
  s = csv::trim(s);
  return s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == "null" || s == "N/A";
}

}  // namespace detail

/// Reads `code,name` rows; a header row starting with `code` is skipped.
inline std::map<std::string, std::string> read_sector_names(std::istream& in) {
  std::map<std::string, std::string> names;
  std::string line;
  bool first = true;
  while (csv::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = csv::split_line(line);
    if (first && !cells.empty() && csv::trim(cells[0]) == "code") {
      first = false;
      continue;
    }
    first = false;
    if (cells.size() < 2)
      throw Error(ErrorCode::kMalformedInput, "sector metadata row needs code,name: " + line);
    names[std::string(csv::trim(cells[0]))] = std::string(csv::trim(cells[1]));
  }
  return names;
}

/// Parses the wide-format price table `date,<code1>,<code2>,...`. Any row
/// with a missing price is dropped for every sector.
inline Dataset read_dataset(std::istream& in,
                            const std::map<std::string, std::string>& names = {}) {
  std::string line;
  if (!csv::getline(in, line))
    throw Error(ErrorCode::kMalformedInput, "malformed header: empty input");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);
  auto header = csv::split_line(line);
  if (header.size() < 2 || csv::trim(header[0]) != "date")
    throw Error(ErrorCode::kMalformedInput,
                "malformed header: expected 'date,<code1>,...'");

  Dataset ds;
  std::set<std::string> seen;
  for (std::size_t c = 1; c < header.size(); ++c) {
    std::string code(csv::trim(header[c]));
    if (code.empty()) throw Error(ErrorCode::kMalformedInput, "malformed header: empty sector code");
    if (!seen.insert(code).second)
      throw Error(ErrorCode::kMalformedInput, "malformed header: duplicate sector code " + code);
    auto it = names.find(code);
    PriceSeries p;
    p.sector = SectorMeta::from_code(code, it == names.end() ? std::string{} : it->second);
    ds.series.push_back(std::move(p));
  }

  std::size_t lineno = 1;
  std::vector<double> row(ds.series.size());
  std::optional<Date> last_date;
  while (csv::getline(in, line)) {
    ++lineno;
    if (csv::trim(line).empty()) continue;
    auto cells = csv::split_line(line);
    if (cells.size() != header.size())
      throw Error(ErrorCode::kMalformedInput,
                  "line " + std::to_string(lineno) + ": expected " +
                      std::to_string(header.size()) + " fields");
    Date date = Date::parse(csv::trim(cells[0]));
    bool missing = false;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (detail::is_missing_cell(cells[c])) {
        missing = true;
        continue;
      }
      auto v = csv::parse_double(cells[c]);
      if (!v)
        throw Error(ErrorCode::kMalformedInput, "line " + std::to_string(lineno) +
                                                    ": unparsable price '" + cells[c] + "'");
      if (!(*v > 0.0) || !std::isfinite(*v))
        throw Error(ErrorCode::kMalformedInput,
                    "line " + std::to_string(lineno) + ": non-positive price");
      row[c - 1] = *v;
    }
    if (last_date && !(*last_date < date))
      throw Error(ErrorCode::kMalformedInput,
                  "line " + std::to_string(lineno) + ": dates not strictly increasing");
    last_date = date;
    if (missing) {
      ++ds.dropped_rows;
      continue;
    }
    for (std::size_t s = 0; s < ds.series.size(); ++s) {
      ds.series[s].dates.push_back(date);
      ds.series[s].closes.push_back(row[s]);
    }
  }
  if (ds.series.front().size() < 2)
    throw Error(ErrorCode::kMalformedInput, "fewer than 2 shared rows after alignment");
  return ds;
}

inline Dataset load_dataset(const std::filesystem::path& path,
                            const std::filesystem::path& names_path = {}) {
  std::map<std::string, std::string> names;
  if (!names_path.empty()) {
    std::ifstream nin(names_path);
    if (!nin) throw Error(ErrorCode::kInputNotFound, "input not found: " + names_path.string());
    names = read_sector_names(nin);
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInputNotFound, "input not found: " + path.string());
  return read_dataset(in, names);
}

/// Writes series sharing one date axis in the wide format read by
/// `read_dataset`.
inline void write_dataset(std::ostream& out, const std::vector<PriceSeries>& series) {
  out << "date";
  for (const auto& s : series) out << ',' << csv::quote(s.sector.code);
  out << '\n';
  if (series.empty()) return;
  for (std::size_t t = 0; t < series.front().size(); ++t) {
    out << series.front().dates[t].iso();
    for (const auto& s : series) out << ',' << csv::format_double(s.closes[t]);
    out << '\n';
  }
}

inline ReturnSeries log_returns(const PriceSeries& p) {
  p.validate();
  ReturnSeries r;
  r.sector = p.sector;
  r.dates.assign(p.dates.begin() + 1, p.dates.end());
  r.values.resize(p.size() - 1);
  for (std::size_t t = 0; t + 1 < p.size(); ++t)
    r.values[t] = std::log(p.closes[t + 1]) - std::log(p.closes[t]);
  return r;
}

inline std::vector<ReturnSeries> log_returns(const Dataset& ds) {
  std::vector<ReturnSeries> out;
  out.reserve(ds.series.size());
  for (const auto& p : ds.series) out.push_back(log_returns(p));
  return out;
}

/// Sample moments; skewness and kurtosis use the biased central moments
/// (kurtosis is raw, so a normal sample gives about 3).
inline SummaryStats summary_stats(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 4) throw Error(ErrorCode::kInvalidArgument, "summary statistics need at least 4 values");
  SummaryStats s;
  double sum = 0.0;
  s.min = x[0];
  s.max = x[0];
  for (double v : x) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  const double nd = static_cast<double>(n);
  s.mean = sum / nd;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  if (m2 == 0.0) throw Error(ErrorCode::kDegenerateSeries, "degenerate series");
  s.std = std::sqrt(m2 / (nd - 1.0));
  m2 /= nd;
  m3 /= nd;
  m4 /= nd;
  s.skewness = m3 / std::pow(m2, 1.5);
  s.kurtosis = m4 / (m2 * m2);
  const double excess = s.kurtosis - 3.0;
  s.jb_statistic = nd / 6.0 * (s.skewness * s.skewness + excess * excess / 4.0);
  s.jb_reject_at_1pct = s.jb_statistic > kJarqueBeraCritical1pct;
  // the mean can land a rounding step outside [min, max] for near-constant data
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

inline SummaryStats summary_stats(const ReturnSeries& r) { return summary_stats(r.values); }

inline ReturnSeries slice(const ReturnSeries& r, const DateRange& window) {
  if (window.empty()) throw Error(ErrorCode::kInvalidArgument, "empty date interval");
  ReturnSeries out;
  out.sector = r.sector;
  auto lo = std::lower_bound(r.dates.begin(), r.dates.end(), window.first);
  auto hi = std::upper_bound(r.dates.begin(), r.dates.end(), window.last);
  if (lo >= hi)
    throw Error(ErrorCode::kEmptyResult, "empty result for window " + window.first.iso() +
                                             " .. " + window.last.iso());
  const auto a = static_cast<std::size_t>(lo - r.dates.begin());
  const auto b = static_cast<std::size_t>(hi - r.dates.begin());
  out.dates.assign(r.dates.begin() + a, r.dates.begin() + b);
  out.values.assign(r.values.begin() + a, r.values.begin() + b);
  return out;
}

inline std::vector<ReturnSeries> slice(const std::vector<ReturnSeries>& all,
                                       const DateRange& window) {
  std::vector<ReturnSeries> out;
  out.reserve(all.size());
  for (const auto& r : all) out.push_back(slice(r, window));
  return out;
}

/// Index-based slice [begin, end) in trading-day positions.
inline ReturnSeries slice_index(const ReturnSeries& r, std::size_t begin, std::size_t end) {
  if (begin >= end || end > r.size())
    throw Error(ErrorCode::kEmptyResult, "empty result for index window");
  ReturnSeries out;
  out.sector = r.sector;
  out.dates.assign(r.dates.begin() + begin, r.dates.begin() + end);
  out.values.assign(r.values.begin() + begin, r.values.begin() + end);
  return out;
}

/// Calendar years touched by a date axis, ascending.
inline std::vector<int> calendar_years(const std::vector<Date>& dates) {
  std::vector<int> years;
  for (const auto& d : dates)
    if (years.empty() || years.back() != d.year()) years.push_back(d.year());
  return years;
}

}  // namespace sectorflow
