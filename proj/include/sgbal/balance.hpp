#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sgbal/errors.hpp"
#include "sgbal/graph.hpp"
#include "sgbal/tree.hpp"

namespace sgbal {

// Per-vertex product of tree-edge signs along the root-to-vertex path.
// parity(root) = +1 and parity(child) = parity(parent) * sign(parent edge),
// so the fundamental cycle of a non-tree edge (u,v) has sign
// sigma(e) * parity(u) * parity(v).
struct ParityLabels {
  std::vector<Sign> parity;
};

inline ParityLabels compute_parity_labels(const SignedGraph& g,
                                          const SpanningTree& t) {
  ParityLabels labels;
  labels.parity.assign(g.vertex_count(), 1);
  for (VertexId v : t.order) {
    if (v == t.root) continue;
    labels.parity[v] = static_cast<Sign>(labels.parity[t.parent[v]] *
                                         g.edge(t.parent_edge[v]).sign);
  }
  return labels;
}

// A nearest balanced state: the full per-edge sign vector plus the Hamming
// distance to the original signs.
struct BalancedState {
  std::vector<Sign> signs;
  std::uint32_t switch_count = 0;
};

// Flips every non-tree edge whose fundamental cycle is negative. Tree edges
// keep their signs, so switch_count is exactly the number of negative
// fundamental cycles and never exceeds |E|-|V|+1.
inline BalancedState balance_with_tree(const SignedGraph& g,
                                       const SpanningTree& t) {
  ParityLabels labels = compute_parity_labels(g, t);
  BalancedState state;
  state.signs = g.sign_vector();
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (t.is_tree_edge[e]) continue;
    const Edge& ed = g.edge(e);
    int cycle = ed.sign * labels.parity[ed.src] * labels.parity[ed.tgt];
    if (cycle < 0) {
      state.signs[e] = static_cast<Sign>(-state.signs[e]);
      ++state.switch_count;
    }
  }
  return state;
}

// Two-coloring test: balanced iff vertices split into (U,W) with positive
// edges inside the parts and negative edges across. Returns the per-vertex
// side (+1 = U, -1 = W) with each component's smallest vertex placed in U,
// or nullopt when no such split exists. Deliberately independent of the
// parity-label machinery above so it can validate it.
inline std::optional<std::vector<Sign>> is_balanced(
    const SignedGraph& g, const std::vector<Sign>& signs) {
  if (signs.size() != g.edge_count())
    throw ContractViolation("sign vector length does not match edge count");
  std::vector<Sign> side(g.vertex_count(), 0);
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < g.vertex_count(); ++s) {
    if (side[s] != 0) continue;
    side[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (std::uint32_t k = g.adj_begin(v); k < g.adj_end(v); ++k) {
        VertexId w = g.adj_vertex(k);
        Sign expect = static_cast<Sign>(side[v] * signs[g.adj_edge(k)]);
        if (side[w] == 0) {
          side[w] = expect;
          stack.push_back(w);
        } else if (side[w] != expect) {
          return std::nullopt;
        }
      }
    }
  }
  return side;
}

// Number of edges violating a vertex assignment, i.e. the sum over edges of
// (1 - e_ij * theta_i * theta_j) / 2.
inline std::uint64_t frustration_of_assignment(const SignedGraph& g,
                                               const std::vector<Sign>& theta) {
  if (theta.size() != g.vertex_count())
    throw ContractViolation("assignment length does not match vertex count");
  std::uint64_t violations = 0;
  for (const Edge& e : g.edges())
    if (e.sign * theta[e.src] * theta[e.tgt] < 0) ++violations;
  return violations;
}

}  // namespace sgbal
