#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "sectorflow/csv.hpp"
#include "sectorflow/error.hpp"
#include "sectorflow/random.hpp"
#include "sectorflow/symbolize.hpp"

namespace sectorflow {

/// Dense row-major square matrix of doubles.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Counts of (target next, target now, source now) symbol triplets.
struct TripletDistribution {
  int q = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  std::size_t index(int next, int now, int source) const {
    return (static_cast<std::size_t>(next - 1) * q + static_cast<std::size_t>(now - 1)) * q +
           static_cast<std::size_t>(source - 1);
  }
  std::uint64_t count(int next, int now, int source) const {
    return counts[index(next, now, source)];
  }
};

enum class Denominators {
  /// Every probability is a marginal of the triplet histogram.
  kConsistent,
  /// Single-time marginals p(x_t), p(x_t, y_t) over all samples; pair and
  /// triplet terms over the shifted samples. Can go slightly negative.
  kMixedSampleCounts,
};

struct TeOptions {
  Denominators denominators = Denominators::kConsistent;
  /// Shuffled-source surrogates subtracted from the raw estimate. Zero
  /// (the default) returns raw symbolic transfer entropy.
  int surrogate_shuffles = 0;
  std::uint64_t surrogate_seed = 0;
  /// Worker threads for te_matrix; 0 means hardware concurrency.
  unsigned threads = 1;
};

namespace detail {

inline void check_symbols(std::span<const int> s, int q, const char* role) {
  for (int v : s)
    if (v < 1 || v > q)
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(role) + " symbol " + std::to_string(v) + " outside [1, q]");
}

}  // namespace detail

inline TripletDistribution triplet_distribution(std::span<const int> target,
                                                std::span<const int> source, int q) {
  if (target.size() != source.size())
    throw Error(ErrorCode::kMisaligned, "symbol series length mismatch");
  if (target.size() < 2) throw Error(ErrorCode::kInvalidArgument, "symbol series too short");
  if (q < 1) throw Error(ErrorCode::kInvalidArgument, "bin count must be positive");
  detail::check_symbols(target, q, "target");
  detail::check_symbols(source, q, "source");
  TripletDistribution d;
  d.q = q;
  d.counts.assign(static_cast<std::size_t>(q) * q * q, 0);
  for (std::size_t t = 0; t + 1 < target.size(); ++t)
    ++d.counts[d.index(target[t + 1], target[t], source[t])];
  d.total = target.size() - 1;
  return d;
}

namespace detail {

inline void check_aligned(const SymbolSeries& a, const SymbolSeries& b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::kMisaligned,
                "length mismatch between " + a.sector.code + " and " + b.sector.code);
  if (a.dates != b.dates)
    throw Error(ErrorCode::kMisaligned,
                "misaligned dates between " + a.sector.code + " and " + b.sector.code);
}

inline int common_q(const SymbolSeries& a, const SymbolSeries& b) {
  return std::max(a.partition.q, b.partition.q);
}

/// Plug-in estimate from a triplet histogram with all probabilities taken
/// over the triplet samples.
inline double te_consistent(const TripletDistribution& d) {
  const int q = d.q;
  const auto qs = static_cast<std::size_t>(q);
  std::vector<std::uint64_t> next_now(qs * qs, 0), now_src(qs * qs, 0), now(qs, 0);
  for (int a = 1; a <= q; ++a)
    for (int b = 1; b <= q; ++b)
      for (int c = 1; c <= q; ++c) {
        const auto n = d.count(a, b, c);
        if (n == 0) continue;
        next_now[(a - 1) * qs + (b - 1)] += n;
        now_src[(b - 1) * qs + (c - 1)] += n;
        now[b - 1] += n;
      }
  const double total = static_cast<double>(d.total);
  double te = 0.0;
  for (int a = 1; a <= q; ++a)
    for (int b = 1; b <= q; ++b)
      for (int c = 1; c <= q; ++c) {
        const auto n = d.count(a, b, c);
        if (n == 0) continue;
        const double num = static_cast<double>(n) * static_cast<double>(now[b - 1]);
        const double den = static_cast<double>(next_now[(a - 1) * qs + (b - 1)]) *
                           static_cast<double>(now_src[(b - 1) * qs + (c - 1)]);
        te += static_cast<double>(n) / total * std::log2(num / den);
      }
  return te;
}

inline double te_mixed_counts(std::span<const int> target, std::span<const int> source,
                              const TripletDistribution& d) {
  const int q = d.q;
  const auto qs = static_cast<std::size_t>(q);
  const double samples = static_cast<double>(target.size());
  const double shifted = static_cast<double>(d.total);
  std::vector<double> p_now(qs, 0.0), p_now_src(qs * qs, 0.0), p_next_now(qs * qs, 0.0);
  for (std::size_t t = 0; t < target.size(); ++t) {
    p_now[target[t] - 1] += 1.0;
    p_now_src[(target[t] - 1) * qs + (source[t] - 1)] += 1.0;
  }
  for (std::size_t t = 0; t + 1 < target.size(); ++t)
    p_next_now[(target[t + 1] - 1) * qs + (target[t] - 1)] += 1.0;
  for (auto& v : p_now) v /= samples;
  for (auto& v : p_now_src) v /= samples;
  for (auto& v : p_next_now) v /= shifted;
  double te = 0.0;
  for (int a = 1; a <= q; ++a)
    for (int b = 1; b <= q; ++b)
      for (int c = 1; c <= q; ++c) {
        const auto n = d.count(a, b, c);
        if (n == 0) continue;
        const double p3 = static_cast<double>(n) / shifted;
        te += p3 * std::log2(p3 * p_now[b - 1] /
                             (p_next_now[(a - 1) * qs + (b - 1)] *
                              p_now_src[(b - 1) * qs + (c - 1)]));
      }
  return te;
}

inline double te_raw(std::span<const int> source, std::span<const int> target, int q,
                     Denominators mode) {
  const auto d = triplet_distribution(target, source, q);
  return mode == Denominators::kConsistent ? te_consistent(d)
                                           : te_mixed_counts(target, source, d);
}

}  // namespace detail

/// Symbolic transfer entropy from `source` to `target` in bits, with one
/// step of history on each side.
inline double transfer_entropy(std::span<const int> source, std::span<const int> target, int q,
                               const TeOptions& opt = {}) {
  double te = detail::te_raw(source, target, q, opt.denominators);
  if (opt.surrogate_shuffles > 0) {
    Rng rng(opt.surrogate_seed);
    std::vector<int> shuffled(source.begin(), source.end());
    double acc = 0.0;
    for (int k = 0; k < opt.surrogate_shuffles; ++k) {
      rng.shuffle(std::span<int>(shuffled));
      acc += detail::te_raw(shuffled, target, q, opt.denominators);
    }
    te -= acc / opt.surrogate_shuffles;
  }
  return te;
}

inline double transfer_entropy(const SymbolSeries& source, const SymbolSeries& target,
                               const TeOptions& opt = {}) {
  detail::check_aligned(source, target);
  return transfer_entropy(source.symbols, target.symbols, detail::common_q(source, target), opt);
}

struct TeMatrix {
  std::vector<SectorMeta> sectors;
  /// te(i, j) is the flow from sector i to sector j.
  SquareMatrix te;
};

struct DaiMatrix {
  std::vector<SectorMeta> sectors;
  /// dai(i, j) = te(i, j) - te(j, i).
  SquareMatrix dai;
};

inline TeMatrix te_matrix(const std::vector<SymbolSeries>& all, const TeOptions& opt = {}) {
  const std::size_t n = all.size();
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 series");
  for (std::size_t i = 1; i < n; ++i) detail::check_aligned(all[0], all[i]);

  TeMatrix m;
  m.te = SquareMatrix(n);
  for (const auto& s : all) m.sectors.push_back(s.sector);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) pairs.emplace_back(i, j);

  auto eval = [&](std::size_t k) {
    auto [i, j] = pairs[k];
    m.te(i, j) = transfer_entropy(all[i], all[j], opt);
  };

  unsigned threads = opt.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                      : opt.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, pairs.size()));
  if (threads <= 1) {
    for (std::size_t k = 0; k < pairs.size(); ++k) eval(k);
    return m;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w)
      workers.emplace_back([&] {
        for (std::size_t k; (k = next.fetch_add(1)) < pairs.size() && !failed;) {
          try {
            eval(k);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
  }
  if (failure) std::rethrow_exception(failure);
  return m;
}

inline DaiMatrix dai_matrix(const TeMatrix& te) {
  const std::size_t n = te.te.size();
  DaiMatrix d;
  d.sectors = te.sectors;
  d.dai = SquareMatrix(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = te.te(i, j) - te.te(j, i);
      d.dai(i, j) = v;
      d.dai(j, i) = -v;
    }
  return d;
}

/// CSV with a header row and first column of sector codes.
inline void write_matrix_csv(std::ostream& out, const std::vector<SectorMeta>& sectors,
                             const SquareMatrix& m) {
  for (const auto& s : sectors) out << ',' << csv::quote(s.code);
  out << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << csv::quote(sectors[i].code);
    for (std::size_t j = 0; j < m.size(); ++j) out << ',' << csv::format_double(m(i, j));
    out << '\n';
  }
}

}  // namespace sectorflow
