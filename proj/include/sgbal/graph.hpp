#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "sgbal/errors.hpp"

namespace sgbal {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using Sign = std::int8_t;  // +1 or -1

constexpr VertexId kNoVertex = static_cast<VertexId>(-1);
constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);

struct Edge {
  VertexId src;
  VertexId tgt;
  Sign sign;

  friend bool operator==(const Edge& a, const Edge& b) {
    return a.src == b.src && a.tgt == b.tgt && a.sign == b.sign;
  }
};

// One line of raw input, before any cleaning.
struct RawEdgeRecord {
  std::int64_t src;
  std::int64_t tgt;
  double weight;
};

enum class InputFormat { Whitespace, Comma };

struct ParseResult {
  std::vector<RawEdgeRecord> records;
  std::uint64_t invalid_lines = 0;
};

// Accounting for everything build_signed_graph throws away. Record counts
// always add up: retained + all drop categories = input_records.
struct PreprocessReport {
  std::uint64_t input_records = 0;
  std::uint64_t retained_edges = 0;
  std::uint64_t self_loops = 0;
  std::uint64_t zero_weight = 0;
  std::uint64_t duplicate_records = 0;
  std::uint64_t conflict_records = 0;  // records in sign-conflicting pairs
  std::uint64_t conflict_pairs = 0;    // unordered pairs those records formed
  std::uint64_t invalid_records = 0;

  bool consistent() const {
    return retained_edges + self_loops + zero_weight + duplicate_records +
               conflict_records + invalid_records ==
           input_records;
  }
};

// EmptyGraphError carrying the drop accounting of the build that failed.
class PreprocessError : public EmptyGraphError {
 public:
  PreprocessError(const std::string& msg, const PreprocessReport& rep)
      : EmptyGraphError(msg), report(rep) {}
  PreprocessReport report;
};

// Immutable undirected simple signed graph. Edges are canonical
// (src < tgt, ascending by (src, tgt)); the adjacency is a compressed
// sparse layout over the same edge indices, neighbors ascending per vertex.
class SignedGraph {
 public:
  SignedGraph() = default;

  // `edges` must already be canonical and reference vertices < n.
  // `labels` maps internal ids back to the original input ids; empty means
  // the identity labeling.
  static SignedGraph from_edges(VertexId n, std::vector<Edge> edges,
                                std::vector<std::int64_t> labels = {}) {
    SignedGraph g;
    g.vertex_count_ = n;
    g.edges_ = std::move(edges);
    g.labels_ = std::move(labels);
    g.check_canonical();
    g.build_adjacency();
    return g;
  }

  VertexId vertex_count() const { return vertex_count_; }
  EdgeId edge_count() const { return static_cast<EdgeId>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  // Original input id of an internal vertex.
  std::int64_t label(VertexId v) const {
    return labels_.empty() ? static_cast<std::int64_t>(v) : labels_[v];
  }
  const std::vector<std::int64_t>& labels() const { return labels_; }

  std::uint32_t degree(VertexId v) const {
    return adj_offsets_[v + 1] - adj_offsets_[v];
  }

  // Adjacency slice for v: positions [adj_begin(v), adj_end(v)) into the
  // parallel arrays below.
  std::uint32_t adj_begin(VertexId v) const { return adj_offsets_[v]; }
  std::uint32_t adj_end(VertexId v) const { return adj_offsets_[v + 1]; }
  VertexId adj_vertex(std::uint32_t slot) const { return adj_vertex_[slot]; }
  Sign adj_sign(std::uint32_t slot) const { return adj_sign_[slot]; }
  EdgeId adj_edge(std::uint32_t slot) const { return adj_edge_[slot]; }

  // Original signs in canonical edge order.
  std::vector<Sign> sign_vector() const {
    std::vector<Sign> s(edges_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i) s[i] = edges_[i].sign;
    return s;
  }

  std::uint64_t positive_edge_count() const {
    std::uint64_t p = 0;
    for (const Edge& e : edges_) p += e.sign > 0;
    return p;
  }

  friend bool operator==(const SignedGraph& a, const SignedGraph& b) {
    if (a.vertex_count_ != b.vertex_count_ || a.edges_ != b.edges_)
      return false;
    for (VertexId v = 0; v < a.vertex_count_; ++v)
      if (a.label(v) != b.label(v)) return false;
    return true;
  }

 private:
  void check_canonical() const {
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      if (e.src >= e.tgt || e.tgt >= vertex_count_)
        throw ContractViolation("edge list is not canonical");
      if (e.sign != 1 && e.sign != -1)
        throw ContractViolation("edge sign outside {+1,-1}");
      if (i > 0) {
        const Edge& p = edges_[i - 1];
        if (!(p.src < e.src || (p.src == e.src && p.tgt < e.tgt)))
          throw ContractViolation("edge list is not sorted or has duplicates");
      }
    }
    if (!labels_.empty() && labels_.size() != vertex_count_)
      throw ContractViolation("label table size mismatch");
  }

  void build_adjacency() {
    adj_offsets_.assign(vertex_count_ + 1, 0);
    for (const Edge& e : edges_) {
      ++adj_offsets_[e.src + 1];
      ++adj_offsets_[e.tgt + 1];
    }
    for (VertexId v = 0; v < vertex_count_; ++v)
      adj_offsets_[v + 1] += adj_offsets_[v];
    adj_vertex_.resize(2 * edges_.size());
    adj_sign_.resize(2 * edges_.size());
    adj_edge_.resize(2 * edges_.size());
    std::vector<std::uint32_t> cursor(adj_offsets_.begin(),
                                      adj_offsets_.end() - 1);
    for (EdgeId i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      put(cursor[e.src]++, e.tgt, e.sign, i);
      put(cursor[e.tgt]++, e.src, e.sign, i);
    }
    // Neighbors ascending per vertex; this fixes the canonical traversal
    // order used by the deterministic samplers.
    for (VertexId v = 0; v < vertex_count_; ++v) {
      std::uint32_t lo = adj_offsets_[v], hi = adj_offsets_[v + 1];
      std::vector<std::uint32_t> idx(hi - lo);
      for (std::uint32_t k = 0; k < hi - lo; ++k) idx[k] = lo + k;
      std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
        return adj_vertex_[a] < adj_vertex_[b];
      });
      std::vector<VertexId> tv(hi - lo);
      std::vector<Sign> ts(hi - lo);
      std::vector<EdgeId> te(hi - lo);
      for (std::uint32_t k = 0; k < hi - lo; ++k) {
        tv[k] = adj_vertex_[idx[k]];
        ts[k] = adj_sign_[idx[k]];
        te[k] = adj_edge_[idx[k]];
      }
      std::copy(tv.begin(), tv.end(), adj_vertex_.begin() + lo);
      std::copy(ts.begin(), ts.end(), adj_sign_.begin() + lo);
      std::copy(te.begin(), te.end(), adj_edge_.begin() + lo);
    }
  }

  void put(std::uint32_t slot, VertexId to, Sign s, EdgeId e) {
    adj_vertex_[slot] = to;
    adj_sign_[slot] = s;
    adj_edge_[slot] = e;
  }

  VertexId vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::int64_t> labels_;
  std::vector<std::uint32_t> adj_offsets_;
  std::vector<VertexId> adj_vertex_;
  std::vector<Sign> adj_sign_;
  std::vector<EdgeId> adj_edge_;
};

namespace detail {

inline bool parse_i64(const std::string& tok, std::int64_t& out) {
  const char* b = tok.data();
  const char* e = b + tok.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

inline bool parse_f64(const std::string& tok, double& out) {
  const char* b = tok.data();
  const char* e = b + tok.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

inline std::vector<std::string> split_line(const std::string& line,
                                           InputFormat fmt) {
  std::vector<std::string> toks;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      toks.push_back(cur);
      cur.clear();
    }
  };
  for (char c : line) {
    bool sep = (fmt == InputFormat::Comma)
                   ? (c == ',')
                   : (c == ' ' || c == '\t');
    if (fmt == InputFormat::Comma && (c == ' ' || c == '\t')) continue;
    if (sep)
      flush();
    else
      cur.push_back(c);
  }
  flush();
  return toks;
}

}  // namespace detail

// Reads "src tgt weight [extra...]" lines. '#' and '%' lines are comments,
// blank lines are skipped. Malformed data lines (fewer than three tokens,
// non-numeric fields, negative ids) are counted, not fatal.
inline ParseResult parse_edge_list(std::istream& in,
                                   InputFormat fmt = InputFormat::Whitespace) {
  if (!in) throw InputError("unreadable input stream");
  ParseResult out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#' || line[first] == '%') continue;
    std::vector<std::string> toks = detail::split_line(line, fmt);
    RawEdgeRecord rec{};
    if (toks.size() < 3 || !detail::parse_i64(toks[0], rec.src) ||
        !detail::parse_i64(toks[1], rec.tgt) ||
        !detail::parse_f64(toks[2], rec.weight) || rec.src < 0 ||
        rec.tgt < 0) {
      ++out.invalid_lines;
      continue;
    }
    out.records.push_back(rec);
  }
  if (in.bad()) throw InputError("read failure on input stream");
  return out;
}

// Cleans raw records into a canonical SignedGraph:
//  - weight sign becomes the edge sign, zero weights are dropped
//  - self-loops are dropped
//  - duplicate pairs with one consistent sign collapse to a single edge
//  - pairs seen with both signs are dropped entirely
//  - surviving endpoint ids are compacted to 0..n-1, originals kept as labels
// `prior_invalid` carries malformed-line counts from the parse stage into the
// report. Throws EmptyGraphError when nothing survives.
inline std::pair<SignedGraph, PreprocessReport> build_signed_graph(
    const std::vector<RawEdgeRecord>& records, std::uint64_t prior_invalid = 0) {
  PreprocessReport rep;
  rep.invalid_records = prior_invalid;
  rep.input_records = records.size() + prior_invalid;

  struct Item {
    std::int64_t u, v;
    Sign sign;
  };
  std::vector<Item> items;
  items.reserve(records.size());
  for (const RawEdgeRecord& r : records) {
    if (std::isnan(r.weight)) {
      ++rep.invalid_records;
      continue;
    }
    if (r.src == r.tgt) {
      ++rep.self_loops;
      continue;
    }
    if (r.weight == 0.0) {
      ++rep.zero_weight;
      continue;
    }
    Item it;
    it.u = std::min(r.src, r.tgt);
    it.v = std::max(r.src, r.tgt);
    it.sign = r.weight > 0 ? Sign{1} : Sign{-1};
    items.push_back(it);
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });

  struct Kept {
    std::int64_t u, v;
    Sign sign;
  };
  std::vector<Kept> kept;
  kept.reserve(items.size());
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    std::uint64_t pos = 0, neg = 0;
    while (j < items.size() && items[j].u == items[i].u &&
           items[j].v == items[i].v) {
      (items[j].sign > 0 ? pos : neg)++;
      ++j;
    }
    std::uint64_t n = j - i;
    if (pos > 0 && neg > 0) {
      ++rep.conflict_pairs;
      rep.conflict_records += n;
    } else {
      kept.push_back({items[i].u, items[i].v, items[i].sign});
      rep.duplicate_records += n - 1;
    }
    i = j;
  }
  rep.retained_edges = kept.size();
  if (kept.empty())
    throw PreprocessError("no edges retained after cleaning", rep);

  std::vector<std::int64_t> ids;
  ids.reserve(2 * kept.size());
  for (const Kept& k : kept) {
    ids.push_back(k.u);
    ids.push_back(k.v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto compact = [&](std::int64_t id) {
    return static_cast<VertexId>(
        std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };

  std::vector<Edge> edges;
  edges.reserve(kept.size());
  for (const Kept& k : kept)
    edges.push_back({compact(k.u), compact(k.v), k.sign});
  // Compaction is monotone, so the sorted item order is already canonical.
  const VertexId n = static_cast<VertexId>(ids.size());
  return {SignedGraph::from_edges(n, std::move(edges), std::move(ids)), rep};
}

struct LccResult {
  SignedGraph graph;
  std::vector<VertexId> old_of_new;  // lcc vertex -> vertex in the input graph
};

// Induced subgraph on the largest connected component. Ties go to the
// component holding the smallest vertex id; vertices are renumbered 0..n'-1
// preserving relative order, labels follow along.
inline LccResult largest_connected_component(const SignedGraph& g) {
  if (g.vertex_count() == 0) throw EmptyGraphError("empty graph");
  std::vector<std::uint32_t> comp(g.vertex_count(), kNoVertex);
  std::uint32_t comp_count = 0;
  std::vector<std::uint64_t> sizes;
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < g.vertex_count(); ++s) {
    if (comp[s] != kNoVertex) continue;
    std::uint64_t size = 0;
    comp[s] = comp_count;
    stack.push_back(s);
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      ++size;
      for (std::uint32_t k = g.adj_begin(v); k < g.adj_end(v); ++k) {
        VertexId w = g.adj_vertex(k);
        if (comp[w] == kNoVertex) {
          comp[w] = comp_count;
          stack.push_back(w);
        }
      }
    }
    sizes.push_back(size);
    ++comp_count;
  }
  // First max wins: scanning from vertex 0 means the tying component that
  // contains the smallest id is found first.
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < comp_count; ++c)
    if (sizes[c] > sizes[best]) best = c;

  std::vector<VertexId> old_of_new;
  std::vector<VertexId> new_of_old(g.vertex_count(), kNoVertex);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (comp[v] == best) {
      new_of_old[v] = static_cast<VertexId>(old_of_new.size());
      old_of_new.push_back(v);
    }
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges())
    if (comp[e.src] == best)
      edges.push_back({new_of_old[e.src], new_of_old[e.tgt], e.sign});
  std::vector<std::int64_t> labels(old_of_new.size());
  for (std::size_t i = 0; i < old_of_new.size(); ++i)
    labels[i] = g.label(old_of_new[i]);
  return {SignedGraph::from_edges(static_cast<VertexId>(old_of_new.size()),
                                  std::move(edges), std::move(labels)),
          std::move(old_of_new)};
}

struct AmazonIngestReport {
  std::uint64_t input_records = 0;
  std::uint64_t positive = 0;
  std::uint64_t negative = 0;
  std::uint64_t neutral_dropped = 0;   // ratings 2 and 3
  std::uint64_t invalid_records = 0;   // rating outside {0,...,5}
};

// (user, item, rating) records -> signed records. Ratings 4-5 become +1,
// 0-1 become -1, 2-3 yield no edge. Non-integer or out-of-range ratings are
// invalid. Callers offset item ids past the user id range beforehand.
inline std::pair<std::vector<RawEdgeRecord>, AmazonIngestReport>
amazon_ratings_to_records(const std::vector<RawEdgeRecord>& records) {
  std::vector<RawEdgeRecord> out;
  AmazonIngestReport rep;
  rep.input_records = records.size();
  out.reserve(records.size());
  for (const RawEdgeRecord& r : records) {
    double w = r.weight;
    if (std::isnan(w) || w < 0 || w > 5 || w != std::floor(w)) {
      ++rep.invalid_records;
      continue;
    }
    int rating = static_cast<int>(w);
    if (rating >= 4) {
      out.push_back({r.src, r.tgt, 1.0});
      ++rep.positive;
    } else if (rating <= 1) {
      out.push_back({r.src, r.tgt, -1.0});
      ++rep.negative;
    } else {
      ++rep.neutral_dropped;
    }
  }
  return {std::move(out), rep};
}

// Canonical text form of a per-edge sign vector: "src->tgt: sign" joined by
// '|' in edge order, signs printed as "1" / "-1". Bit-exact and injective
// over the states of one graph.
inline std::string serialize_state(const SignedGraph& g,
                                   const std::vector<Sign>& signs) {
  if (signs.size() != g.edge_count())
    throw ContractViolation("state length does not match edge count");
  std::string out;
  out.reserve(16 * g.edge_count());
  char buf[24];
  auto append_u32 = [&](std::uint32_t x) {
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    out.append(buf, p);
  };
  for (EdgeId i = 0; i < g.edge_count(); ++i) {
    if (i) out.push_back('|');
    const Edge& e = g.edge(i);
    append_u32(e.src);
    out.append("->");
    append_u32(e.tgt);
    out.append(": ");
    if (signs[i] < 0) out.push_back('-');
    out.push_back('1');
  }
  return out;
}

}  // namespace sgbal
