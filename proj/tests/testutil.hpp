#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "sgbal/graph.hpp"
#include "sgbal/rng.hpp"

namespace sgbal::testutil {

// Convenience graph builder: edges may come in any order/orientation.
inline SignedGraph make_graph(
    VertexId n, std::vector<std::tuple<VertexId, VertexId, int>> edges) {
  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (auto [u, v, s] : edges) {
    if (u > v) std::swap(u, v);
    canon.push_back({u, v, static_cast<Sign>(s)});
  }
  std::sort(canon.begin(), canon.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.tgt < b.tgt;
  });
  return SignedGraph::from_edges(n, std::move(canon));
}

// Random connected simple signed graph: a random attachment tree plus extra
// random non-duplicate edges up to edge_count.
inline SignedGraph random_connected_graph(Rng& rng, VertexId n,
                                          std::uint64_t edge_count,
                                          double p_negative) {
  std::vector<std::pair<VertexId, VertexId>> pairs;
  auto has_pair = [&](VertexId u, VertexId v) {
    if (u > v) std::swap(u, v);
    for (auto [a, b] : pairs)
      if (a == u && b == v) return true;
    return false;
  };
  for (VertexId v = 1; v < n; ++v) {
    VertexId p = rng.next_below(v);
    pairs.push_back({std::min(p, v), std::max(p, v)});
  }
  std::uint64_t max_edges = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  std::uint64_t want = std::min(edge_count, max_edges);
  while (pairs.size() < want) {
    VertexId u = rng.next_below(n);
    VertexId v = rng.next_below(n);
    if (u == v || has_pair(u, v)) continue;
    pairs.push_back({std::min(u, v), std::max(u, v)});
  }
  std::vector<std::tuple<VertexId, VertexId, int>> edges;
  edges.reserve(pairs.size());
  for (auto [u, v] : pairs)
    edges.push_back({u, v, rng.next_double() < p_negative ? -1 : 1});
  return make_graph(n, std::move(edges));
}

// Reads the sign sequence back out of a serialized state key. Signs come
// back in canonical edge order because that is the serialization order.
inline std::vector<Sign> signs_from_state_key(const std::string& key) {
  std::vector<Sign> signs;
  std::size_t pos = 0;
  while (pos < key.size()) {
    std::size_t colon = key.find(": ", pos);
    if (colon == std::string::npos) break;
    std::size_t val = colon + 2;
    signs.push_back(key[val] == '-' ? Sign{-1} : Sign{1});
    std::size_t bar = key.find('|', val);
    if (bar == std::string::npos) break;
    pos = bar + 1;
  }
  return signs;
}

}  // namespace sgbal::testutil
