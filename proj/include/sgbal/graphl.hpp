#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sgbal/balance.hpp"
#include "sgbal/errors.hpp"
#include "sgbal/graph.hpp"
#include "sgbal/rng.hpp"

namespace sgbal {

struct GraphLConfig {
  double alpha = 0.001;        // learning rate
  std::uint64_t lambda = 1000; // gradient updates
  std::uint64_t seed = 0;
  std::uint32_t restarts = 5;
};

struct GraphLResult {
  std::uint64_t frustration = 0;
  std::vector<Sign> theta;
  std::vector<Sign> balanced_signs;
  // Discretized imbalance (violating-edge count) before each update, for the
  // winning restart. Diagnostic only; no control flow depends on it.
  std::vector<double> loss_trace;
  std::uint32_t restart_index = 0;
  std::vector<std::uint64_t> restart_frustrations;
};

// Per-vertex relaxation values, i.i.d. uniform on [-1, 1), fixed per seed.
inline std::vector<double> init_gamma(VertexId n, std::uint64_t seed) {
  if (n == 0) throw EmptyGraphError("cannot initialize an empty vector");
  Rng rng(seed, 0);
  std::vector<double> gamma(n);
  for (double& x : gamma) x = rng.next_signed_unit();
  return gamma;
}

// Relaxed imbalance: sum over edges of (1 - e_ij * G_i * G_j) / 2.
inline double relaxed_loss(const SignedGraph& g,
                           const std::vector<double>& gamma) {
  if (gamma.size() != g.vertex_count())
    throw ContractViolation("gamma length does not match vertex count");
  double loss = 0;
  for (const Edge& e : g.edges())
    loss += (1.0 - e.sign * gamma[e.src] * gamma[e.tgt]) / 2.0;
  return loss;
}

// dL/dG_i = -1/2 * sum over neighbors j of e_ij * G_j. Each undirected edge
// contributes to both endpoint gradients.
inline std::vector<double> gradient(const SignedGraph& g,
                                    const std::vector<double>& gamma) {
  if (gamma.size() != g.vertex_count())
    throw ContractViolation("gamma length does not match vertex count");
  std::vector<double> grad(g.vertex_count(), 0.0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    double acc = 0;
    for (std::uint32_t k = g.adj_begin(v); k < g.adj_end(v); ++k)
      acc += g.adj_sign(k) * gamma[g.adj_vertex(k)];
    grad[v] = -0.5 * acc;
  }
  return grad;
}

// theta_i = +1 when G_i >= 0 (negative zero included), else -1.
inline std::vector<Sign> discretize(const std::vector<double>& gamma) {
  std::vector<Sign> theta(gamma.size());
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (std::isnan(gamma[i]))
      throw ContractViolation("NaN component in gamma vector");
    theta[i] = gamma[i] < 0 ? Sign{-1} : Sign{1};
  }
  return theta;
}

namespace detail {

inline std::uint64_t discretized_loss(const SignedGraph& g,
                                      const std::vector<double>& gamma) {
  std::uint64_t violations = 0;
  for (const Edge& e : g.edges()) {
    int tu = gamma[e.src] < 0 ? -1 : 1;
    int tv = gamma[e.tgt] < 0 ? -1 : 1;
    if (e.sign * tu * tv < 0) ++violations;
  }
  return violations;
}

}  // namespace detail

// One gradient-descent run from an explicit starting vector: lambda plain
// updates G <- G - alpha * grad, then threshold to theta, count violating
// edges, and flip each of them to emit a balanced sign vector. Throws
// DivergenceError naming the update index when the relaxed loss turns
// non-finite.
inline GraphLResult run_graphl_from(const SignedGraph& g,
                                    std::vector<double> gamma, double alpha,
                                    std::uint64_t lambda) {
  if (alpha <= 0) throw ConfigError("learning rate must be positive");
  if (gamma.size() != g.vertex_count())
    throw ContractViolation("gamma length does not match vertex count");
  for (double x : gamma)
    if (!std::isfinite(x))
      throw ContractViolation("non-finite component in initial gamma");

  GraphLResult result;
  result.loss_trace.reserve(lambda);
  for (std::uint64_t x = 0; x < lambda; ++x) {
    result.loss_trace.push_back(
        static_cast<double>(detail::discretized_loss(g, gamma)));
    std::vector<double> grad = gradient(g, gamma);
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      gamma[v] -= alpha * grad[v];
    if (!std::isfinite(relaxed_loss(g, gamma)))
      throw DivergenceError(
          "relaxed loss became non-finite at update " + std::to_string(x), x);
  }

  result.theta = discretize(gamma);
  result.frustration = frustration_of_assignment(g, result.theta);
  result.balanced_signs = g.sign_vector();
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (ed.sign * result.theta[ed.src] * result.theta[ed.tgt] < 0)
      result.balanced_signs[e] = static_cast<Sign>(-result.balanced_signs[e]);
  }
  return result;
}

// Full heuristic: `restarts` independent runs seeded seed, seed+1, ...; the
// run with the smallest frustration wins (ties keep the earliest restart).
inline GraphLResult run_graphl(const SignedGraph& g, const GraphLConfig& cfg) {
  if (cfg.restarts < 1) throw ConfigError("restarts must be >= 1");
  if (cfg.alpha <= 0) throw ConfigError("learning rate must be positive");
  if (g.vertex_count() == 0) throw EmptyGraphError("empty graph");

  GraphLResult best;
  std::vector<std::uint64_t> frustrations;
  frustrations.reserve(cfg.restarts);
  for (std::uint32_t r = 0; r < cfg.restarts; ++r) {
    GraphLResult run = run_graphl_from(
        g, init_gamma(g.vertex_count(), cfg.seed + r), cfg.alpha, cfg.lambda);
    frustrations.push_back(run.frustration);
    if (r == 0 || run.frustration < best.frustration) {
      best = std::move(run);
      best.restart_index = r;
    }
  }
  best.restart_frustrations = std::move(frustrations);
  return best;
}

}  // namespace sgbal
