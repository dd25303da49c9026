#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sectorflow/arborescence.hpp"
#include "sectorflow/entropy.hpp"
#include "sectorflow/network.hpp"
#include "sectorflow/random.hpp"
#include "sectorflow/symbolize.hpp"
#include "sectorflow/timeseries.hpp"

namespace sectorflow {

enum class PartitionScope {
  /// Bin bounds recomputed on each analysis window.
  kWindow,
  /// Bin bounds taken from the full sample and reused for every window.
  kGlobal,
};

struct PipelineConfig {
  int q = kDefaultBins;
  PartitionScope scope = PartitionScope::kWindow;
  TeOptions te;
};

/// Everything computed for one analysis window.
struct WindowResult {
  DateRange span;
  std::size_t trading_days = 0;
  TeMatrix te;
  DaiMatrix dai;
  InfoFlowNetwork network;
  Arborescence outgoing;
  Arborescence incoming;
  InfoFlowPath outgoing_path;
  InfoFlowPath incoming_path;

  const Arborescence& tree(Orientation o) const {
    return o == Orientation::kOutgoing ? outgoing : incoming;
  }
  const InfoFlowPath& path(Orientation o) const {
    return o == Orientation::kOutgoing ? outgoing_path : incoming_path;
  }
};

/// Runs returns -> symbols -> TE -> DAI -> network -> both MSAs and paths.
/// `global_partitions`, when given, holds one partition per series.
inline WindowResult run_window(const std::vector<ReturnSeries>& returns,
                               const PipelineConfig& cfg,
                               const std::vector<Partition>* global_partitions = nullptr) {
  if (returns.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 sectors");
  std::vector<SymbolSeries> symbols;
  symbols.reserve(returns.size());
  for (std::size_t i = 0; i < returns.size(); ++i) {
    if (global_partitions)
      symbols.push_back(encode(returns[i], (*global_partitions)[i]));
    else
      symbols.push_back(symbolize(returns[i], cfg.q));
  }
  WindowResult w;
  w.span = {returns.front().dates.front(), returns.front().dates.back()};
  w.trading_days = returns.front().size();
  w.te = te_matrix(symbols, cfg.te);
  w.dai = dai_matrix(w.te);
  w.network = build_network(w.dai);
  w.outgoing = max_spanning_arborescence(w.network, Orientation::kOutgoing);
  w.incoming = max_spanning_arborescence(w.network, Orientation::kIncoming);
  w.outgoing_path = maximal_information_flow_path(w.outgoing);
  w.incoming_path = maximal_information_flow_path(w.incoming);
  return w;
}

inline std::vector<Partition> global_partitions(const std::vector<ReturnSeries>& returns, int q) {
  std::vector<Partition> out;
  out.reserve(returns.size());
  for (const auto& r : returns) out.push_back(make_partition(r, q));
  return out;
}

namespace detail {

inline std::optional<std::vector<Partition>> partitions_for(const std::vector<ReturnSeries>& full,
                                                            const PipelineConfig& cfg) {
  if (cfg.scope == PartitionScope::kGlobal) return global_partitions(full, cfg.q);
  return std::nullopt;
}

}  // namespace detail

inline WindowResult whole_sample_msas(const std::vector<ReturnSeries>& returns,
                                      const PipelineConfig& cfg = {}) {
  return run_window(returns, cfg);
}

inline WindowResult whole_sample_msas(const Dataset& ds, const PipelineConfig& cfg = {}) {
  return whole_sample_msas(log_returns(ds), cfg);
}

/// Pipeline over the closed date interval `window`.
inline WindowResult range_msas(const std::vector<ReturnSeries>& returns, const DateRange& window,
                               const PipelineConfig& cfg = {}) {
  auto parts = detail::partitions_for(returns, cfg);
  return run_window(slice(returns, window), cfg, parts ? &*parts : nullptr);
}

// ---------------------------------------------------------------------------
// Yearly evolution

inline constexpr std::size_t kMinTradingDaysPerYear = 30;

struct YearlyMsaReport {
  int year = 0;
  Orientation orientation = Orientation::kOutgoing;
  std::size_t trading_days = 0;
  SectorMeta root;
  std::vector<SectorMeta> path;
  /// Path weight in bits.
  double path_dai = 0.0;
  Arborescence arborescence;

  std::size_t path_sector_count() const { return path.size(); }
  /// Path weight in units of 1e-2 bits, as reported in the yearly tables.
  double path_dai_centi() const { return path_dai * 100.0; }
};

struct YearlyStudy {
  std::vector<YearlyMsaReport> outgoing;
  std::vector<YearlyMsaReport> incoming;
  std::vector<std::string> warnings;

  const std::vector<YearlyMsaReport>& reports(Orientation o) const {
    return o == Orientation::kOutgoing ? outgoing : incoming;
  }
};

inline YearlyMsaReport make_report(int year, const WindowResult& w, Orientation o) {
  YearlyMsaReport r;
  r.year = year;
  r.orientation = o;
  r.trading_days = w.trading_days;
  r.arborescence = w.tree(o);
  r.root = r.arborescence.nodes[r.arborescence.root];
  const auto& p = w.path(o);
  for (auto v : p.nodes) r.path.push_back(r.arborescence.nodes[v]);
  r.path_dai = p.total_weight;
  return r;
}

/// One report per calendar year and orientation; each year is
/// re-symbolized and re-estimated on its own returns. Years with fewer than
/// 30 trading days are skipped with a warning.
inline YearlyStudy yearly_reports(const std::vector<ReturnSeries>& returns,
                                  const PipelineConfig& cfg = {}) {
  if (returns.empty()) throw Error(ErrorCode::kInvalidArgument, "empty dataset");
  auto parts = detail::partitions_for(returns, cfg);
  YearlyStudy study;
  for (int year : calendar_years(returns.front().dates)) {
    auto window = slice(returns, DateRange::calendar_year(year));
    if (window.front().size() < kMinTradingDaysPerYear) {
      study.warnings.push_back("year " + std::to_string(year) + " skipped: only " +
                               std::to_string(window.front().size()) + " trading days");
      continue;
    }
    const auto w = run_window(window, cfg, parts ? &*parts : nullptr);
    study.outgoing.push_back(make_report(year, w, Orientation::kOutgoing));
    study.incoming.push_back(make_report(year, w, Orientation::kIncoming));
  }
  if (study.outgoing.empty())
    throw Error(ErrorCode::kEmptyResult, "no calendar year with enough trading days");
  return study;
}

/// Root appearances keyed by sector code.
inline std::map<std::string, int> root_occurrences(std::span<const YearlyMsaReport> reports) {
  std::map<std::string, int> counts;
  for (const auto& r : reports) ++counts[r.root.code];
  return counts;
}

enum class DegreeKind { kTotal, kIn, kOut };

struct DegreeTable {
  Orientation orientation = Orientation::kOutgoing;
  std::vector<int> years;
  std::vector<SectorMeta> sectors;
  /// degrees[row][sector], rows aligned with `years`.
  std::vector<std::vector<NodeDegree>> degrees;

  int value(std::size_t row, std::size_t sector, DegreeKind kind) const {
    const auto& d = degrees[row][sector];
    switch (kind) {
      case DegreeKind::kIn: return d.in;
      case DegreeKind::kOut: return d.out;
      default: return d.total();
    }
  }
};

inline DegreeTable degree_heatmap(std::span<const YearlyMsaReport> reports) {
  if (reports.empty()) throw Error(ErrorCode::kInvalidArgument, "no reports");
  DegreeTable t;
  t.orientation = reports.front().orientation;
  t.sectors = reports.front().arborescence.nodes;
  for (const auto& r : reports) {
    t.years.push_back(r.year);
    t.degrees.push_back(degrees(r.arborescence));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Turmoil event windows

struct IndexWindow {
  std::size_t begin = 0;  // inclusive trading-day index
  std::size_t end = 0;    // exclusive
  DateRange dates;

  std::size_t days() const { return end - begin; }
};

inline constexpr std::array<const char*, 3> kTurmoilWindowNames{"before", "during", "after"};

/// With crash length T (trading days from crash start to crash end,
/// inclusive) and start index s: during = [s - T, s + T), before and after
/// are the adjacent windows of the same length 2T.
struct TurmoilWindows {
  Date crash_start;
  Date crash_end;
  std::size_t crash_start_index = 0;
  std::size_t crash_end_index = 0;
  std::size_t crash_length = 0;
  std::array<IndexWindow, 3> windows;
};

inline TurmoilWindows turmoil_windows(const std::vector<Date>& axis, Date crash_start,
                                      Date crash_end) {
  if (crash_end < crash_start)
    throw Error(ErrorCode::kInvalidArgument, "crash end precedes crash start");
  auto lo = std::lower_bound(axis.begin(), axis.end(), crash_start);
  auto hi = std::upper_bound(axis.begin(), axis.end(), crash_end);
  if (lo >= hi)
    throw Error(ErrorCode::kInsufficientCoverage, "no trading days inside the crash interval");
  TurmoilWindows tw;
  tw.crash_start = crash_start;
  tw.crash_end = crash_end;
  tw.crash_start_index = static_cast<std::size_t>(lo - axis.begin());
  tw.crash_end_index = static_cast<std::size_t>(hi - axis.begin()) - 1;
  const std::size_t T = tw.crash_end_index - tw.crash_start_index + 1;
  tw.crash_length = T;
  const std::size_t s = tw.crash_start_index;
  if (s < 3 * T || s + 3 * T > axis.size())
    throw Error(ErrorCode::kInsufficientCoverage,
                "insufficient coverage: turmoil windows need " + std::to_string(3 * T) +
                    " trading days on each side of the crash start");
  for (std::size_t k = 0; k < 3; ++k) {
    auto& w = tw.windows[k];
    w.begin = s - 3 * T + 2 * T * k;
    w.end = w.begin + 2 * T;
    w.dates = {axis[w.begin], axis[w.end - 1]};
  }
  return tw;
}

struct TurmoilStudy {
  TurmoilWindows windows;
  /// before, during, after
  std::array<WindowResult, 3> results;

  int root_degree(std::size_t window, Orientation o) const {
    return sectorflow::root_degree(results[window].tree(o));
  }
  double path_weight(std::size_t window, Orientation o) const {
    return results[window].path(o).total_weight;
  }
};

inline TurmoilStudy turmoil_study(const std::vector<ReturnSeries>& returns,
                                  const PipelineConfig& cfg, Date crash_start, Date crash_end) {
  if (returns.empty()) throw Error(ErrorCode::kInvalidArgument, "empty dataset");
  TurmoilStudy st;
  st.windows = turmoil_windows(returns.front().dates, crash_start, crash_end);
  auto parts = detail::partitions_for(returns, cfg);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& w = st.windows.windows[k];
    std::vector<ReturnSeries> part;
    part.reserve(returns.size());
    for (const auto& r : returns) part.push_back(slice_index(r, w.begin, w.end));
    st.results[k] = run_window(part, cfg, parts ? &*parts : nullptr);
  }
  return st;
}

// ---------------------------------------------------------------------------
// Root-sector specificity

/// Pearson correlation coefficient.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::kMisaligned, "pearson: length mismatch");
  if (x.size() < 2) throw Error(ErrorCode::kInvalidArgument, "pearson: need at least 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw Error(ErrorCode::kDegenerateSeries, "pearson: zero variance");
  return std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
}

struct SectorCorrelation {
  int year = 0;
  SectorMeta sector;
  double rho = 0.0;
};

struct SpecificityResult {
  std::vector<SectorCorrelation> sources;
  std::vector<SectorCorrelation> sinks;
  std::vector<SectorCorrelation> controls;
  std::uint64_t seed = 0;
  std::size_t samples_per_year = 1;

  static double mean_of(const std::vector<SectorCorrelation>& v) {
    if (v.empty()) return std::nan("");
    double s = 0.0;
    for (const auto& c : v) s += c.rho;
    return s / static_cast<double>(v.size());
  }
  double source_mean() const { return mean_of(sources); }
  double sink_mean() const { return mean_of(sinks); }
  double control_mean() const { return mean_of(controls); }
};

namespace detail {

/// Index returns on the dates of `r`; every date must be present.
inline std::vector<double> index_values_on(const std::map<Date, double>& index,
                                           const ReturnSeries& r) {
  std::vector<double> out;
  out.reserve(r.size());
  for (const auto& d : r.dates) {
    auto it = index.find(d);
    if (it == index.end())
      throw Error(ErrorCode::kMisaligned, "index series has no return on " + d.iso());
    out.push_back(it->second);
  }
  return out;
}

inline std::size_t find_sector(const std::vector<ReturnSeries>& returns, const std::string& code) {
  for (std::size_t i = 0; i < returns.size(); ++i)
    if (returns[i].sector.code == code) return i;
  throw Error(ErrorCode::kInvalidArgument, "unknown sector " + code);
}

}  // namespace detail

/// Per year: correlation of the source root's and sink root's daily returns
/// with the index, plus `samples_per_year` non-root sectors drawn without
/// replacement as a control group.
inline SpecificityResult specificity_study(const std::vector<ReturnSeries>& returns,
                                           const YearlyStudy& study, const ReturnSeries& index,
                                           std::uint64_t seed,
                                           std::size_t samples_per_year = 1) {
  if (samples_per_year < 1)
    throw Error(ErrorCode::kInvalidArgument, "control samples per year must be >= 1");
  std::map<Date, double> index_by_date;
  for (std::size_t i = 0; i < index.size(); ++i) index_by_date[index.dates[i]] = index.values[i];

  SpecificityResult res;
  res.seed = seed;
  res.samples_per_year = samples_per_year;
  Rng rng(seed);

  auto corr_for = [&](std::size_t sector, int year) {
    const auto r = slice(returns[sector], DateRange::calendar_year(year));
    const auto idx = detail::index_values_on(index_by_date, r);
    return SectorCorrelation{year, r.sector, pearson(r.values, idx)};
  };

  for (std::size_t k = 0; k < study.outgoing.size(); ++k) {
    const int year = study.outgoing[k].year;
    const std::size_t src = detail::find_sector(returns, study.outgoing[k].root.code);
    std::optional<std::size_t> sink;
    for (const auto& r : study.incoming)
      if (r.year == year) sink = detail::find_sector(returns, r.root.code);
    res.sources.push_back(corr_for(src, year));
    if (sink) res.sinks.push_back(corr_for(*sink, year));

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < returns.size(); ++i)
      if (i != src && (!sink || i != *sink)) candidates.push_back(i);
    if (samples_per_year > candidates.size())
      throw Error(ErrorCode::kInvalidArgument,
                  "control samples per year exceed the number of non-root sectors");
    for (std::size_t m = 0; m < samples_per_year; ++m) {
      const auto j = m + static_cast<std::size_t>(rng.below(candidates.size() - m));
      std::swap(candidates[m], candidates[j]);
      res.controls.push_back(corr_for(candidates[m], year));
    }
  }
  return res;
}

}  // namespace sectorflow
