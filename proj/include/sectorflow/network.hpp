#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sectorflow/entropy.hpp"

namespace sectorflow {

struct WeightedEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  double weight = 0.0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// Directed network with at most one positive-weight edge per sector pair.
struct InfoFlowNetwork {
  std::vector<SectorMeta> nodes;
  std::vector<WeightedEdge> edges;
  std::vector<std::string> warnings;

  std::size_t size() const { return nodes.size(); }

  InfoFlowNetwork reversed() const {
    InfoFlowNetwork r = *this;
    for (auto& e : r.edges) std::swap(e.source, e.target);
    return r;
  }
};

/// Orients every sector pair along the sign of its DAI entry. Exact zeros
/// produce no edge and a warning.
inline InfoFlowNetwork build_network(const DaiMatrix& d) {
  InfoFlowNetwork g;
  g.nodes = d.sectors;
  const std::size_t n = d.dai.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = d.dai(i, j);
      if (v > 0.0) {
        g.edges.push_back({i, j, v});
      } else if (v < 0.0) {
        g.edges.push_back({j, i, -v});
      } else {
        g.warnings.push_back("zero DAI between " + d.sectors[i].code + " and " +
                             d.sectors[j].code + "; no edge");
      }
    }
  return g;
}

}  // namespace sectorflow
