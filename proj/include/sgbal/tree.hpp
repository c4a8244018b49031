#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <string_view>
#include <vector>

#include "sgbal/errors.hpp"
#include "sgbal/graph.hpp"
#include "sgbal/rng.hpp"

namespace sgbal {

enum class SamplerMethod {
  Bfs,
  Dfs,
  Rdfs,
  AldousBroder,
  KruskalRandom,
  PrimRandom,
  HybridRdfsBfs,
};

inline constexpr SamplerMethod kAllSamplerMethods[] = {
    SamplerMethod::Bfs,           SamplerMethod::Dfs,
    SamplerMethod::Rdfs,          SamplerMethod::AldousBroder,
    SamplerMethod::KruskalRandom, SamplerMethod::PrimRandom,
    SamplerMethod::HybridRdfsBfs,
};

inline std::string_view method_token(SamplerMethod m) {
  switch (m) {
    case SamplerMethod::Bfs: return "bfs";
    case SamplerMethod::Dfs: return "dfs";
    case SamplerMethod::Rdfs: return "rdfs";
    case SamplerMethod::AldousBroder: return "ab";
    case SamplerMethod::KruskalRandom: return "kruskal";
    case SamplerMethod::PrimRandom: return "prim";
    case SamplerMethod::HybridRdfsBfs: return "hybrid";
  }
  return "?";
}

inline std::optional<SamplerMethod> method_from_token(std::string_view tok) {
  for (SamplerMethod m : kAllSamplerMethods)
    if (method_token(m) == tok) return m;
  return std::nullopt;
}

// Rooted spanning tree. `order` lists the vertices in discovery order with
// every parent before its children, which lets downstream passes run in one
// linear sweep.
struct SpanningTree {
  VertexId root = 0;
  std::vector<VertexId> parent;        // kNoVertex at the root
  std::vector<EdgeId> parent_edge;     // kNoEdge at the root
  std::vector<std::uint8_t> is_tree_edge;  // one flag per graph edge
  std::vector<VertexId> order;

  std::uint64_t tree_edge_count() const {
    std::uint64_t n = 0;
    for (std::uint8_t b : is_tree_edge) n += b;
    return n;
  }
};

namespace detail {

struct TreeBuilder {
  TreeBuilder(const SignedGraph& g, VertexId root) {
    t.root = root;
    t.parent.assign(g.vertex_count(), kNoVertex);
    t.parent_edge.assign(g.vertex_count(), kNoEdge);
    t.is_tree_edge.assign(g.edge_count(), 0);
    t.order.reserve(g.vertex_count());
    visited.assign(g.vertex_count(), 0);
    visit_root(root);
  }

  void visit_root(VertexId r) {
    visited[r] = 1;
    t.order.push_back(r);
  }

  void attach(VertexId v, VertexId par, EdgeId e) {
    visited[v] = 1;
    t.parent[v] = par;
    t.parent_edge[v] = e;
    t.is_tree_edge[e] = 1;
    t.order.push_back(v);
  }

  bool seen(VertexId v) const { return visited[v] != 0; }

  SpanningTree finish(const SignedGraph& g) {
    if (t.order.size() != g.vertex_count())
      throw DisconnectedError("graph is not connected");
    return std::move(t);
  }

  SpanningTree t;
  std::vector<std::uint8_t> visited;
};

inline SpanningTree bfs_tree(const SignedGraph& g, VertexId root) {
  TreeBuilder b(g, root);
  std::queue<VertexId> q;
  q.push(root);
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop();
    for (std::uint32_t k = g.adj_begin(v); k < g.adj_end(v); ++k) {
      VertexId w = g.adj_vertex(k);
      if (!b.seen(w)) {
        b.attach(w, v, g.adj_edge(k));
        q.push(w);
      }
    }
  }
  return b.finish(g);
}

inline SpanningTree dfs_tree(const SignedGraph& g, VertexId root) {
  TreeBuilder b(g, root);
  // Emulates recursive DFS: neighbors are taken in canonical order.
  std::vector<std::pair<VertexId, std::uint32_t>> stack;
  stack.push_back({root, g.adj_begin(root)});
  while (!stack.empty()) {
    auto& [v, cur] = stack.back();
    bool descended = false;
    while (cur < g.adj_end(v)) {
      std::uint32_t k = cur++;
      VertexId w = g.adj_vertex(k);
      if (!b.seen(w)) {
        b.attach(w, v, g.adj_edge(k));
        stack.push_back({w, g.adj_begin(w)});
        descended = true;
        break;
      }
    }
    if (!descended) stack.pop_back();
  }
  return b.finish(g);
}

inline SpanningTree rdfs_tree(const SignedGraph& g, VertexId root, Rng& rng) {
  TreeBuilder b(g, root);
  // DFS with the neighbor list reshuffled each time a vertex is expanded.
  struct Frame {
    VertexId v;
    std::vector<std::uint32_t> slots;
    std::size_t cur = 0;
  };
  auto make_frame = [&](VertexId v) {
    Frame f;
    f.v = v;
    f.slots.reserve(g.degree(v));
    for (std::uint32_t k = g.adj_begin(v); k < g.adj_end(v); ++k)
      f.slots.push_back(k);
    rng.shuffle(f.slots);
    return f;
  };
  std::vector<Frame> stack;
  stack.push_back(make_frame(root));
  while (!stack.empty()) {
    Frame& f = stack.back();
    bool descended = false;
    while (f.cur < f.slots.size()) {
      std::uint32_t k = f.slots[f.cur++];
      VertexId w = g.adj_vertex(k);
      if (!b.seen(w)) {
        b.attach(w, f.v, g.adj_edge(k));
        stack.push_back(make_frame(w));
        descended = true;
        break;
      }
    }
    if (!descended) stack.pop_back();
  }
  return b.finish(g);
}

inline bool is_connected(const SignedGraph& g) {
  if (g.vertex_count() == 0) return true;
  std::vector<std::uint8_t> seen(g.vertex_count(), 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  std::uint64_t visited = 0;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    ++visited;
    for (std::uint32_t k = g.adj_begin(v); k < g.adj_end(v); ++k)
      if (!seen[g.adj_vertex(k)]) {
        seen[g.adj_vertex(k)] = 1;
        stack.push_back(g.adj_vertex(k));
      }
  }
  return visited == g.vertex_count();
}

inline SpanningTree aldous_broder_tree(const SignedGraph& g, VertexId root,
                                       Rng& rng, std::uint64_t step_cap) {
  // The walk alone cannot distinguish "not connected" from "slow cover",
  // so rule the former out first; the step cap then only reports genuinely
  // pathological walks.
  if (!is_connected(g)) throw DisconnectedError("graph is not connected");
  TreeBuilder b(g, root);
  std::uint64_t unvisited = g.vertex_count() - 1;
  VertexId v = root;
  std::uint64_t steps = 0;
  while (unvisited > 0) {
    if (++steps > step_cap)
      throw SamplerTimeoutError("random walk exceeded its step cap");
    std::uint32_t deg = g.degree(v);
    if (deg == 0) throw DisconnectedError("graph is not connected");
    std::uint32_t k = g.adj_begin(v) + rng.next_below(deg);
    VertexId w = g.adj_vertex(k);
    if (!b.seen(w)) {
      b.attach(w, v, g.adj_edge(k));
      --unvisited;
    }
    v = w;
  }
  return b.finish(g);
}

inline std::uint64_t aldous_broder_step_cap(const SignedGraph& g) {
  std::uint64_t n = g.vertex_count();
  return 100 * n * n;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<VertexId>(i);
  }

  VertexId find(VertexId x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(VertexId a, VertexId b) {
    VertexId ra = find(a), rb = find(b);
    if (ra == rb) return false;
    if (size_[ra] < size_[rb]) std::swap(ra, rb);
    parent_[rb] = ra;
    size_[ra] += size_[rb];
    return true;
  }

 private:
  std::vector<VertexId> parent_;
  std::vector<std::uint32_t> size_;
};

// Orients an unrooted set of chosen tree edges into parent links via BFS.
inline SpanningTree orient_edges(const SignedGraph& g, VertexId root,
                                 const std::vector<EdgeId>& chosen) {
  std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj(g.vertex_count());
  for (EdgeId e : chosen) {
    adj[g.edge(e).src].push_back({g.edge(e).tgt, e});
    adj[g.edge(e).tgt].push_back({g.edge(e).src, e});
  }
  TreeBuilder b(g, root);
  std::queue<VertexId> q;
  q.push(root);
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop();
    for (auto [w, e] : adj[v]) {
      if (!b.seen(w)) {
        b.attach(w, v, e);
        q.push(w);
      }
    }
  }
  return b.finish(g);
}

// Fresh uniform weights each call, then a minimum spanning tree; ties fall
// back to the lower edge index.
inline SpanningTree kruskal_random_tree(const SignedGraph& g, VertexId root,
                                        Rng& rng) {
  std::vector<double> w(g.edge_count());
  for (double& x : w) x = rng.next_double();
  std::vector<EdgeId> idx(g.edge_count());
  for (EdgeId i = 0; i < g.edge_count(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](EdgeId a, EdgeId b) {
    return w[a] != w[b] ? w[a] < w[b] : a < b;
  });
  UnionFind uf(g.vertex_count());
  std::vector<EdgeId> chosen;
  chosen.reserve(g.vertex_count() - 1);
  for (EdgeId e : idx)
    if (uf.unite(g.edge(e).src, g.edge(e).tgt)) {
      chosen.push_back(e);
      if (chosen.size() + 1 == g.vertex_count()) break;
    }
  return orient_edges(g, root, chosen);
}

inline SpanningTree prim_random_tree(const SignedGraph& g, VertexId root,
                                     Rng& rng) {
  std::vector<double> w(g.edge_count());
  for (double& x : w) x = rng.next_double();
  TreeBuilder b(g, root);
  using Item = std::tuple<double, EdgeId, VertexId>;  // (weight, edge, to)
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  auto push_frontier = [&](VertexId v) {
    for (std::uint32_t k = g.adj_begin(v); k < g.adj_end(v); ++k) {
      VertexId to = g.adj_vertex(k);
      if (!b.seen(to)) pq.push({w[g.adj_edge(k)], g.adj_edge(k), to});
    }
  };
  push_frontier(root);
  while (!pq.empty()) {
    auto [wt, e, to] = pq.top();
    pq.pop();
    if (b.seen(to)) continue;
    VertexId from = g.edge(e).src == to ? g.edge(e).tgt : g.edge(e).src;
    b.attach(to, from, e);
    push_frontier(to);
  }
  return b.finish(g);
}

}  // namespace detail

// Root choice when the caller does not override it: BFS and DFS draw a
// uniformly random root per iteration (their trees are otherwise fixed per
// root); every other method starts at vertex 0.
inline VertexId default_root(const SignedGraph& g, SamplerMethod m, Rng& rng) {
  if (g.vertex_count() == 0) throw EmptyGraphError("empty graph");
  if (m == SamplerMethod::Bfs || m == SamplerMethod::Dfs)
    return rng.next_below(g.vertex_count());
  return 0;
}

// Samples one spanning tree. (seed, iteration) selects an independent
// deterministic random stream, so the same arguments always reproduce the
// same tree. Throws DisconnectedError when g is not connected and
// SamplerTimeoutError when the random walk exceeds 100*|V|^2 steps.
inline SpanningTree sample_tree(const SignedGraph& g, SamplerMethod m,
                                std::uint64_t seed, std::uint64_t iteration,
                                std::optional<VertexId> root_override = {}) {
  Rng rng(seed, iteration);
  VertexId root = root_override ? *root_override : default_root(g, m, rng);
  if (root >= g.vertex_count()) throw ContractViolation("root out of range");
  switch (m) {
    case SamplerMethod::Bfs:
      return detail::bfs_tree(g, root);
    case SamplerMethod::Dfs:
      return detail::dfs_tree(g, root);
    case SamplerMethod::Rdfs:
      return detail::rdfs_tree(g, root, rng);
    case SamplerMethod::AldousBroder:
      return detail::aldous_broder_tree(g, root, rng,
                                        detail::aldous_broder_step_cap(g));
    case SamplerMethod::KruskalRandom:
      return detail::kruskal_random_tree(g, root, rng);
    case SamplerMethod::PrimRandom:
      return detail::prim_random_tree(g, root, rng);
    case SamplerMethod::HybridRdfsBfs:
      // Fair coin per call: heads runs BFS, tails runs RDFS.
      if (!rng.next_bit()) return detail::bfs_tree(g, root);
      return detail::rdfs_tree(g, root, rng);
  }
  throw ConfigError("unknown sampler method");
}

// Structural check used by tests: |V|-1 tree edges, acyclic parent links
// reaching the root, parent_edge marks matching is_tree_edge exactly.
inline bool validate_spanning_tree(const SignedGraph& g,
                                   const SpanningTree& t) {
  VertexId n = g.vertex_count();
  if (t.parent.size() != n || t.parent_edge.size() != n) return false;
  if (t.is_tree_edge.size() != g.edge_count()) return false;
  if (t.order.size() != n) return false;
  if (t.root >= n || t.parent[t.root] != kNoVertex) return false;
  if (t.tree_edge_count() != static_cast<std::uint64_t>(n) - 1) return false;
  std::vector<std::uint8_t> seen(n, 0);
  if (t.order[0] != t.root) return false;
  for (VertexId v : t.order) {
    if (v >= n || seen[v]) return false;
    if (v != t.root) {
      if (t.parent[v] == kNoVertex || !seen[t.parent[v]]) return false;
      EdgeId e = t.parent_edge[v];
      if (e == kNoEdge || !t.is_tree_edge[e]) return false;
      const Edge& ed = g.edge(e);
      bool matches = (ed.src == v && ed.tgt == t.parent[v]) ||
                     (ed.tgt == v && ed.src == t.parent[v]);
      if (!matches) return false;
    }
    seen[v] = 1;
  }
  std::vector<std::uint8_t> used(g.edge_count(), 0);
  for (VertexId v : t.order) {
    if (v == t.root) continue;
    if (used[t.parent_edge[v]]) return false;
    used[t.parent_edge[v]] = 1;
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (t.is_tree_edge[e] != used[e]) return false;
  return true;
}

}  // namespace sgbal
