#pragma once

#include <cstdint>
#include <vector>

#include "sgbal/balance.hpp"
#include "sgbal/errors.hpp"
#include "sgbal/graph.hpp"

namespace sgbal {

struct OracleResult {
  std::uint64_t frustration = 0;
  std::vector<Sign> best_theta;
  std::uint64_t assignments_checked = 0;
};

constexpr VertexId kOracleDefaultMaxVertices = 22;

// Exact frustration index by exhaustive bipartition search. Balance theory
// reduces the search space to vertex two-colorings: the minimum number of
// edges violating any bipartition equals the minimum number of sign flips
// to a balanced state. Vertex 0 is fixed to +1 (global flips do not change
// the count), so 2^(|V|-1) assignments are scanned; ties resolve to the
// smallest mask, i.e. the first assignment reaching the minimum.
inline OracleResult exact_frustration(
    const SignedGraph& g, VertexId max_vertices = kOracleDefaultMaxVertices) {
  VertexId n = g.vertex_count();
  if (n == 0) throw EmptyGraphError("empty graph");
  if (n > max_vertices)
    throw SizeGuardError("graph exceeds the exhaustive-search vertex guard");

  OracleResult result;
  const std::uint64_t space = std::uint64_t{1} << (n - 1);
  std::vector<Sign> theta(n, 1);
  std::uint64_t best = static_cast<std::uint64_t>(-1);
  for (std::uint64_t mask = 0; mask < space; ++mask) {
    for (VertexId v = 1; v < n; ++v)
      theta[v] = (mask >> (v - 1)) & 1 ? Sign{-1} : Sign{1};
    std::uint64_t violations = 0;
    for (const Edge& e : g.edges()) {
      if (e.sign * theta[e.src] * theta[e.tgt] < 0 && ++violations >= best)
        break;
    }
    ++result.assignments_checked;
    if (violations < best) {
      best = violations;
      result.best_theta = theta;
      if (best == 0) break;  // zero is a global lower bound
    }
  }
  result.frustration = best;
  return result;
}

}  // namespace sgbal
