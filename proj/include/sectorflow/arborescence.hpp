#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "sectorflow/error.hpp"
#include "sectorflow/network.hpp"

namespace sectorflow {

enum class Orientation { kOutgoing, kIncoming };

inline const char* to_string(Orientation o) {
  return o == Orientation::kOutgoing ? "outgoing" : "incoming";
}

/// Spanning arborescence over the nodes of an InfoFlowNetwork. Outgoing
/// trees point away from the root (the information source); incoming
/// trees point towards it (the sink).
struct Arborescence {
  Orientation orientation = Orientation::kOutgoing;
  std::vector<SectorMeta> nodes;
  std::size_t root = 0;
  /// Sorted by (source code, target code).
  std::vector<WeightedEdge> edges;
  double total_weight = 0.0;

  std::size_t size() const { return nodes.size(); }
};

struct InfoFlowPath {
  /// Node indices in flow direction.
  std::vector<std::size_t> nodes;
  double total_weight = 0.0;

  std::size_t length() const { return nodes.size(); }
};

struct NodeDegree {
  int in = 0;
  int out = 0;
  int total() const { return in + out; }

  friend bool operator==(const NodeDegree&, const NodeDegree&) = default;
};

namespace edmonds {

/// Arc of a minimum-arborescence problem over any totally ordered additive
/// cost type.
template <typename Cost>
struct Arc {
  std::size_t from = 0;
  std::size_t to = 0;
  Cost cost{};
};

/// Chu-Liu/Edmonds minimum arborescence rooted at `root`. Returns indices
/// into `arcs` (one entering arc per non-root node), or nullopt when some
/// node is unreachable. Among equal-cost entering arcs the lower index
/// wins. O(V * E).
template <typename Cost>
std::optional<std::vector<std::size_t>> min_arborescence(std::size_t n, std::size_t root,
                                                         const std::vector<Arc<Cost>>& arcs) {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> best(n, kNone);
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    const auto& a = arcs[k];
    if (a.from == a.to || a.to == root) continue;
    if (best[a.to] == kNone || a.cost < arcs[best[a.to]].cost) best[a.to] = k;
  }
  for (std::size_t v = 0; v < n; ++v)
    if (v != root && best[v] == kNone) return std::nullopt;

  // Label cycles of the best-entering-arc graph.
  std::vector<std::size_t> cycle_of(n, kNone);
  std::vector<std::size_t> visited_by(n, kNone);
  std::size_t cycles = 0;
  for (std::size_t start = 0; start < n; ++start) {
    std::size_t v = start;
    while (v != root && visited_by[v] == kNone && cycle_of[v] == kNone) {
      visited_by[v] = start;
      v = arcs[best[v]].from;
    }
    if (v != root && visited_by[v] == start && cycle_of[v] == kNone) {
      for (std::size_t u = v; cycle_of[u] == kNone; u = arcs[best[u]].from) cycle_of[u] = cycles;
      ++cycles;
    }
  }

  if (cycles == 0) {
    std::vector<std::size_t> chosen;
    for (std::size_t v = 0; v < n; ++v)
      if (v != root) chosen.push_back(best[v]);
    return chosen;
  }

  // Contract: each cycle becomes one super-node; other nodes keep their own.
  std::vector<std::size_t> comp(n);
  std::size_t next_id = cycles;
  for (std::size_t v = 0; v < n; ++v) comp[v] = cycle_of[v] != kNone ? cycle_of[v] : next_id++;

  std::vector<Arc<Cost>> contracted;
  std::vector<std::size_t> origin;
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    const auto& a = arcs[k];
    const std::size_t u = comp[a.from];
    const std::size_t w = comp[a.to];
    if (u == w || a.to == root) continue;
    Cost c = a.cost;
    if (cycle_of[a.to] != kNone) c = c - arcs[best[a.to]].cost;
    contracted.push_back({u, w, c});
    origin.push_back(k);
  }

  auto sub = min_arborescence(next_id, comp[root], contracted);
  if (!sub) return std::nullopt;

  std::vector<std::size_t> chosen;
  std::vector<std::size_t> entered_at(cycles, kNone);
  for (std::size_t k : *sub) {
    const std::size_t orig = origin[k];
    chosen.push_back(orig);
    const std::size_t to = arcs[orig].to;
    if (cycle_of[to] != kNone) entered_at[cycle_of[to]] = to;
  }
  for (std::size_t v = 0; v < n; ++v)
    if (cycle_of[v] != kNone && entered_at[cycle_of[v]] != v) chosen.push_back(best[v]);
  return chosen;
}

}  // namespace edmonds

namespace detail {

/// Lexicographic cost: negated weight first, then the summed tie-break rank
/// of the chosen edges.
struct TieBrokenCost {
  double weight = 0.0;
  std::int64_t rank = 0;

  friend TieBrokenCost operator-(TieBrokenCost a, const TieBrokenCost& b) {
    return {a.weight - b.weight, a.rank - b.rank};
  }
  friend bool operator<(const TieBrokenCost& a, const TieBrokenCost& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    return a.rank < b.rank;
  }
};

/// Rank of each edge in (source code, target code) order.
inline std::vector<std::int64_t> edge_ranks(const InfoFlowNetwork& g) {
  std::vector<std::size_t> order(g.edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ea = g.edges[a];
    const auto& eb = g.edges[b];
    return std::tie(g.nodes[ea.source].code, g.nodes[ea.target].code) <
           std::tie(g.nodes[eb.source].code, g.nodes[eb.target].code);
  });
  std::vector<std::int64_t> rank(g.edges.size());
  for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = static_cast<std::int64_t>(k);
  return rank;
}

inline void sort_edges(std::vector<WeightedEdge>& edges, const std::vector<SectorMeta>& nodes) {
  std::sort(edges.begin(), edges.end(), [&](const WeightedEdge& a, const WeightedEdge& b) {
    return std::tie(nodes[a.source].code, nodes[a.target].code) <
           std::tie(nodes[b.source].code, nodes[b.target].code);
  });
}

inline double sum_weights(const std::vector<WeightedEdge>& edges) {
  double s = 0.0;
  for (const auto& e : edges) s += e.weight;
  return s;
}

/// Selection key shared by the solver and the exhaustive oracle: larger
/// total weight, then smaller rank sum, then smaller root code.
struct CandidateKey {
  double weight = 0.0;
  std::int64_t rank = 0;
  std::string root_code;

  bool better_than(const CandidateKey& o) const {
    if (weight != o.weight) return weight > o.weight;
    if (rank != o.rank) return rank < o.rank;
    return root_code < o.root_code;
  }
};

inline Arborescence make_outgoing(const InfoFlowNetwork& g, std::size_t root,
                                  const std::vector<std::size_t>& edge_ids) {
  Arborescence a;
  a.orientation = Orientation::kOutgoing;
  a.nodes = g.nodes;
  a.root = root;
  for (std::size_t k : edge_ids) a.edges.push_back(g.edges[k]);
  sort_edges(a.edges, a.nodes);
  a.total_weight = sum_weights(a.edges);
  return a;
}

inline std::int64_t rank_sum(const std::vector<std::int64_t>& rank,
                             const std::vector<std::size_t>& ids) {
  std::int64_t s = 0;
  for (std::size_t k : ids) s += rank[k];
  return s;
}

inline Arborescence max_outgoing(const InfoFlowNetwork& g) {
  const std::size_t n = g.size();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty network");
  const auto rank = edge_ranks(g);
  std::vector<edmonds::Arc<TieBrokenCost>> arcs;
  arcs.reserve(g.edges.size());
  for (std::size_t k = 0; k < g.edges.size(); ++k)
    arcs.push_back({g.edges[k].source, g.edges[k].target, {-g.edges[k].weight, rank[k]}});

  std::optional<Arborescence> best;
  CandidateKey best_key;
  for (std::size_t r = 0; r < n; ++r) {
    auto ids = edmonds::min_arborescence(n, r, arcs);
    if (!ids) continue;
    Arborescence cand = make_outgoing(g, r, *ids);
    CandidateKey key{cand.total_weight, rank_sum(rank, *ids), g.nodes[r].code};
    if (!best || key.better_than(best_key)) {
      best = std::move(cand);
      best_key = key;
    }
  }
  if (!best)
    throw Error(ErrorCode::kNoSpanningArborescence, "no root reaches every node");
  return *best;
}

inline Arborescence reverse_back(Arborescence a) {
  for (auto& e : a.edges) std::swap(e.source, e.target);
  sort_edges(a.edges, a.nodes);
  a.total_weight = sum_weights(a.edges);
  a.orientation = Orientation::kIncoming;
  return a;
}

}  // namespace detail

/// Maximum-weight spanning arborescence over all candidate roots. The
/// incoming tree is the outgoing tree of the edge-reversed network,
/// reversed back.
inline Arborescence max_spanning_arborescence(const InfoFlowNetwork& g, Orientation o) {
  if (o == Orientation::kOutgoing) return detail::max_outgoing(g);
  return detail::reverse_back(detail::max_outgoing(g.reversed()));
}

inline constexpr std::size_t kMaxEnumerationNodes = 8;

/// Exhaustive oracle for max_spanning_arborescence: tries every parent
/// assignment for every root. Limited to small networks.
inline Arborescence enumerate_arborescences(const InfoFlowNetwork& g, Orientation o) {
  if (o == Orientation::kIncoming)
    return detail::reverse_back(enumerate_arborescences(g.reversed(), Orientation::kOutgoing));
  const std::size_t n = g.size();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty network");
  if (n > kMaxEnumerationNodes)
    throw Error(ErrorCode::kInvalidArgument, "enumeration limited to 8 nodes");
  const auto rank = detail::edge_ranks(g);
  std::vector<std::vector<std::size_t>> incoming(n);
  for (std::size_t k = 0; k < g.edges.size(); ++k) incoming[g.edges[k].target].push_back(k);

  std::optional<Arborescence> best;
  detail::CandidateKey best_key;
  for (std::size_t root = 0; root < n; ++root) {
    std::vector<std::size_t> free_nodes;
    bool feasible = true;
    for (std::size_t v = 0; v < n; ++v) {
      if (v == root) continue;
      if (incoming[v].empty()) feasible = false;
      free_nodes.push_back(v);
    }
    if (!feasible) continue;
    std::vector<std::size_t> choice(free_nodes.size(), 0);
    std::vector<std::size_t> parent(n);
    while (true) {
      for (std::size_t i = 0; i < free_nodes.size(); ++i)
        parent[free_nodes[i]] = g.edges[incoming[free_nodes[i]][choice[i]]].source;
      bool acyclic = true;
      for (std::size_t v : free_nodes) {
        std::size_t u = v;
        std::size_t steps = 0;
        while (u != root && steps <= n) {
          u = parent[u];
          ++steps;
        }
        if (u != root) {
          acyclic = false;
          break;
        }
      }
      if (acyclic) {
        std::vector<std::size_t> ids;
        for (std::size_t i = 0; i < free_nodes.size(); ++i)
          ids.push_back(incoming[free_nodes[i]][choice[i]]);
        Arborescence cand = detail::make_outgoing(g, root, ids);
        detail::CandidateKey key{cand.total_weight, detail::rank_sum(rank, ids),
                                 g.nodes[root].code};
        if (!best || key.better_than(best_key)) {
          best = std::move(cand);
          best_key = key;
        }
      }
      std::size_t i = 0;
      for (; i < choice.size(); ++i) {
        if (++choice[i] < incoming[free_nodes[i]].size()) break;
        choice[i] = 0;
      }
      if (i == choice.size()) break;
    }
  }
  if (!best)
    throw Error(ErrorCode::kNoSpanningArborescence, "no root reaches every node");
  return *best;
}

/// Returns a description of the first violated structural invariant, or
/// nullopt when `a` is a valid spanning arborescence.
inline std::optional<std::string> check_arborescence(const Arborescence& a) {
  const std::size_t n = a.size();
  if (n == 0) return "no nodes";
  if (a.root >= n) return "root out of range";
  if (a.edges.size() != n - 1) return "expected N-1 edges";
  std::vector<std::size_t> parent(n, n);
  const bool out = a.orientation == Orientation::kOutgoing;
  double sum = 0.0;
  for (const auto& e : a.edges) {
    if (e.source >= n || e.target >= n || e.source == e.target) return "bad edge endpoints";
    if (!(e.weight > 0.0)) return "non-positive edge weight";
    // parent points towards the root in both orientations
    const std::size_t child = out ? e.target : e.source;
    const std::size_t up = out ? e.source : e.target;
    if (child == a.root) return out ? "root has an incoming edge" : "root has an outgoing edge";
    if (parent[child] != n)
      return out ? "node with two incoming edges" : "node with two outgoing edges";
    parent[child] = up;
    sum += e.weight;
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t u = v;
    std::size_t steps = 0;
    while (u != a.root && steps <= n) {
      u = parent[u];
      if (u == n) return "disconnected node";
      ++steps;
    }
    if (u != a.root) return "directed cycle";
  }
  if (sum != a.total_weight) return "total weight mismatch";
  return std::nullopt;
}

inline std::vector<NodeDegree> degrees(const Arborescence& a) {
  std::vector<NodeDegree> d(a.size());
  for (const auto& e : a.edges) {
    ++d[e.source].out;
    ++d[e.target].in;
  }
  return d;
}

inline int root_degree(const Arborescence& a) { return degrees(a)[a.root].total(); }

/// Heaviest directed path between the root and a leaf, in flow direction:
/// root to leaf for outgoing trees, leaf to root for incoming ones. Equal
/// weights go to the lexicographically smallest code sequence.
inline InfoFlowPath maximal_information_flow_path(const Arborescence& a) {
  const std::size_t n = a.size();
  const bool out = a.orientation == Orientation::kOutgoing;
  // Walk the tree away from the root regardless of orientation.
  std::vector<std::vector<std::pair<std::size_t, double>>> away(n);
  for (const auto& e : a.edges) {
    if (out)
      away[e.source].push_back({e.target, e.weight});
    else
      away[e.target].push_back({e.source, e.weight});
  }

  auto codes_of = [&](const std::vector<std::size_t>& path) {
    std::vector<std::string> c;
    c.reserve(path.size());
    for (auto v : path) c.push_back(a.nodes[v].code);
    return c;
  };

  InfoFlowPath best;
  std::vector<std::string> best_codes;
  bool have = false;
  std::vector<std::size_t> stack_path{a.root};

  std::function<void(std::size_t, double)> walk = [&](std::size_t v, double w) {
    if (away[v].empty()) {
      std::vector<std::size_t> flow = stack_path;
      if (!out) std::reverse(flow.begin(), flow.end());
      auto codes = codes_of(flow);
      if (!have || w > best.total_weight || (w == best.total_weight && codes < best_codes)) {
        best.nodes = std::move(flow);
        best.total_weight = w;
        best_codes = std::move(codes);
        have = true;
      }
      return;
    }
    for (auto [next, ew] : away[v]) {
      stack_path.push_back(next);
      walk(next, w + ew);
      stack_path.pop_back();
    }
  };
  walk(a.root, 0.0);
  return best;
}

}  // namespace sectorflow
