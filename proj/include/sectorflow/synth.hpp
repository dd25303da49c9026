#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sectorflow/date.hpp"
#include "sectorflow/error.hpp"
#include "sectorflow/random.hpp"
#include "sectorflow/timeseries.hpp"

namespace sectorflow::synth {

struct CoupledBinarySample {
  std::vector<int> source;  // y
  std::vector<int> target;  // x
};

/// y iid uniform on {1, 2}; x[t+1] copies y[t] with probability c and is
/// otherwise an independent uniform draw.
inline CoupledBinarySample generate_coupled_binary(double c, std::size_t length,
                                                   std::uint64_t seed) {
  if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "coupling outside [0, 1]");
  if (length < 2) throw Error(ErrorCode::kInvalidArgument, "length must be >= 2");
  Rng rng(seed);
  CoupledBinarySample s;
  s.source.resize(length);
  s.target.resize(length);
  for (auto& v : s.source) v = 1 + static_cast<int>(rng.below(2));
  s.target[0] = 1 + static_cast<int>(rng.below(2));
  for (std::size_t t = 0; t + 1 < length; ++t) {
    const bool copy = rng.bernoulli(c);
    const int fresh = 1 + static_cast<int>(rng.below(2));
    s.target[t + 1] = copy ? s.source[t] : fresh;
  }
  return s;
}

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// Exact TE(y -> x) of the coupled binary process: 1 - H2((1 + c) / 2).
inline double analytic_te_coupled_binary(double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "coupling outside [0, 1]");
  return 1.0 - binary_entropy((1.0 + c) / 2.0);
}

/// Target returns copy the source's previous-day return with probability
/// `strength`.
struct Coupling {
  std::size_t source = 0;
  std::size_t target = 0;
  double strength = 0.0;
};

struct Regime {
  /// Number of daily returns in this regime.
  std::size_t length = 0;
  std::vector<Coupling> couplings;
};

struct SyntheticDataset {
  std::vector<SectorMeta> sectors;
  Date start{2000, 1, 3};
  double sigma = 0.02;
  double initial_price = 1000.0;
  std::uint64_t seed = 1;
  std::vector<Regime> regimes;

  std::size_t return_count() const {
    std::size_t n = 0;
    for (const auto& r : regimes) n += r.length;
    return n;
  }
};

/// Codes 900010, 900020, ... so short codes read 010, 020, ...
inline std::vector<SectorMeta> numbered_sectors(std::size_t n) {
  std::vector<SectorMeta> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string code = std::to_string(900000 + 10 * (i + 1));
    out.push_back(SectorMeta::from_code(code, "Synthetic " + code.substr(3)));
  }
  return out;
}

/// Monday-to-Friday calendar starting at the first weekday on or after
/// `start`.
inline std::vector<Date> business_days(Date start, std::size_t count) {
  std::vector<Date> out;
  out.reserve(count);
  Date d = start;
  while (out.size() < count) {
    const unsigned wd = d.weekday();
    if (wd != 0 && wd != 6) out.push_back(d);
    d = d.next_day();
  }
  return out;
}

/// Renders the planted process as prices. Every sector draws one uniform and
/// one normal per day, in sector order, so the stream layout does not
/// depend on the couplings.
inline std::vector<PriceSeries> generate_dataset(const SyntheticDataset& spec) {
  const std::size_t n = spec.sectors.size();
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "no sectors");
  if (!(spec.sigma > 0.0) || !(spec.initial_price > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "sigma and initial price must be positive");
  for (const auto& reg : spec.regimes) {
    std::vector<double> inflow(n, 0.0);
    for (const auto& c : reg.couplings) {
      if (c.source >= n || c.target >= n || c.source == c.target)
        throw Error(ErrorCode::kInvalidArgument, "bad coupling endpoints");
      if (!(c.strength >= 0.0 && c.strength <= 1.0))
        throw Error(ErrorCode::kInvalidArgument, "coupling outside [0, 1]");
      inflow[c.target] += c.strength;
    }
    for (double f : inflow)
      if (f > 1.0 + 1e-12)
        throw Error(ErrorCode::kInvalidArgument, "couplings into one sector sum above 1");
  }
  const std::size_t L = spec.return_count();
  if (L < 1) throw Error(ErrorCode::kInvalidArgument, "no returns requested");

  Rng rng(spec.seed);
  std::vector<std::vector<double>> ret(n, std::vector<double>(L));
  std::vector<double> u(n), z(n);
  std::size_t t = 0;
  for (const auto& reg : spec.regimes) {
    for (std::size_t k = 0; k < reg.length; ++k, ++t) {
      for (std::size_t i = 0; i < n; ++i) {
        u[i] = rng.uniform();
        z[i] = spec.sigma * rng.normal();
      }
      for (std::size_t i = 0; i < n; ++i) {
        double value = z[i];
        if (t > 0) {
          double cum = 0.0;
          for (const auto& c : reg.couplings) {
            if (c.target != i) continue;
            cum += c.strength;
            if (u[i] < cum) {
              value = ret[c.source][t - 1];
              break;
            }
          }
        }
        ret[i][t] = value;
      }
    }
  }

  const auto dates = business_days(spec.start, L + 1);
  std::vector<PriceSeries> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].sector = spec.sectors[i];
    out[i].dates = dates;
    out[i].closes.resize(L + 1);
    double log_p = std::log(spec.initial_price);
    out[i].closes[0] = spec.initial_price;
    for (std::size_t s = 0; s < L; ++s) {
      log_p += ret[i][s];
      out[i].closes[s + 1] = std::exp(log_p);
    }
  }
  return out;
}

/// Hub sector drives every other sector with the same strength.
inline SyntheticDataset star_dataset(std::size_t n, std::size_t hub, double strength,
                                     std::size_t length, std::uint64_t seed) {
  SyntheticDataset s;
  s.sectors = numbered_sectors(n);
  s.seed = seed;
  Regime r;
  r.length = length;
  for (std::size_t i = 0; i < n; ++i)
    if (i != hub) r.couplings.push_back({hub, i, strength});
  s.regimes.push_back(r);
  return s;
}

inline SyntheticDataset independent_dataset(std::size_t n, std::size_t length,
                                            std::uint64_t seed) {
  SyntheticDataset s;
  s.sectors = numbered_sectors(n);
  s.seed = seed;
  s.regimes.push_back({length, {}});
  return s;
}

/// Three equal regimes of 2T returns: uncoupled, star from `hub`, uncoupled.
/// The crash interval to analyze is returns [3T, 4T).
inline SyntheticDataset turmoil_dataset(std::size_t n, std::size_t hub, double strength,
                                        std::size_t crash_length, std::uint64_t seed) {
  SyntheticDataset s;
  s.sectors = numbered_sectors(n);
  s.seed = seed;
  Regime calm{2 * crash_length, {}};
  Regime coupled{2 * crash_length, {}};
  for (std::size_t i = 0; i < n; ++i)
    if (i != hub) coupled.couplings.push_back({hub, i, strength});
  s.regimes = {calm, coupled, calm};
  return s;
}

/// Bundled demo: 28 sectors over 2015-2017 with a different planted
/// two-level tree each year (hub -> 9 sectors -> 2 sectors each).
inline SyntheticDataset demo28(std::uint64_t seed = 20150101) {
  constexpr std::size_t kSectors = 28;
  SyntheticDataset s;
  s.sectors = numbered_sectors(kSectors);
  s.seed = seed;
  s.start = Date(2015, 1, 1);
  const std::array<std::size_t, 3> hubs{22, 8, 15};
  const std::array<std::size_t, 3> strides{5, 9, 11};  // coprime to 28
  // Business days per year, minus the first price row in 2015.
  const std::array<std::size_t, 3> lengths{260, 261, 260};
  for (std::size_t y = 0; y < 3; ++y) {
    Regime r;
    r.length = lengths[y];
    const std::size_t hub = hubs[y];
    std::vector<std::size_t> others;
    for (std::size_t k = 1; k < kSectors; ++k) others.push_back((hub + k * strides[y]) % kSectors);
    for (std::size_t a = 0; a < 9; ++a) {
      r.couplings.push_back({hub, others[a], 0.7});
      for (std::size_t b = 0; b < 2; ++b)
        r.couplings.push_back({others[a], others[9 + 2 * a + b], 0.5});
    }
    s.regimes.push_back(std::move(r));
  }
  return s;
}

}  // namespace sectorflow::synth
