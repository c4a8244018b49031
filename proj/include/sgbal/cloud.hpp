#pragma once

#include <chrono>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "sgbal/balance.hpp"
#include "sgbal/errors.hpp"
#include "sgbal/graph.hpp"
#include "sgbal/tree.hpp"

namespace sgbal {

// Fixed per-entry bookkeeping estimate added to the key length when sizing
// the cloud against a byte budget.
constexpr std::uint64_t kCloudEntryOverhead = 64;

// Capacity in states for a byte budget, assuming entries the size of
// `sample_key`. Throws BudgetError when not even one entry fits.
inline std::uint64_t derive_f_max(std::uint64_t budget_bytes,
                                  const std::string& sample_key) {
  if (budget_bytes == 0) throw BudgetError("byte budget is zero");
  std::uint64_t per_entry = sample_key.size() + kCloudEntryOverhead;
  if (budget_bytes < per_entry)
    throw BudgetError("byte budget smaller than one cloud entry");
  return budget_bytes / per_entry;
}

struct CloudEntry {
  std::uint64_t count = 0;
  std::uint32_t switch_count = 0;
};

// Memory-bounded map from serialized balanced state to (count, switches).
// Below capacity every distinct state is admitted. At capacity a new state
// is admitted only if it beats the worst stored switch count, in which case
// the worst entry (ties: lexicographically largest key) is evicted.
// Duplicate keys always increment their count, full or not.
class FrustrationCloud {
 public:
  // No byte limit; capacity is effectively unbounded.
  FrustrationCloud() = default;

  FrustrationCloud(std::uint64_t budget_bytes, const std::string& sample_key)
      : byte_budget_(budget_bytes),
        f_max_(derive_f_max(budget_bytes, sample_key)) {}

  void insert(const std::string& key, std::uint32_t switches) {
    insert_counted(key, 1, switches);
  }

  // Merge another cloud into this one under the same admission rules;
  // counts accumulate. Iteration order of `other` is its key order, so a
  // fixed merge sequence is fully deterministic.
  void merge_from(const FrustrationCloud& other) {
    for (const auto& [key, entry] : other.entries_)
      insert_counted(key, entry.count, entry.switch_count);
  }

  const std::map<std::string, CloudEntry>& entries() const { return entries_; }
  std::uint64_t size() const { return entries_.size(); }
  std::uint64_t f_max() const { return f_max_; }
  std::uint64_t byte_budget() const { return byte_budget_; }
  std::uint64_t bytes_used() const { return bytes_used_; }
  std::uint64_t evictions() const { return evictions_; }
  std::uint64_t discards() const { return discards_; }

  std::uint64_t total_count() const {
    std::uint64_t n = 0;
    for (const auto& [key, entry] : entries_) n += entry.count;
    return n;
  }

  std::uint32_t min_switches() const {
    if (entries_.empty()) throw ContractViolation("cloud is empty");
    return by_switches_.begin()->first;
  }

  // Entry holding the minimum switch count (ties: smallest key).
  const std::string& best_key() const {
    if (entries_.empty()) throw ContractViolation("cloud is empty");
    return *by_switches_.begin()->second;
  }

  // Lowest-switch-count entries first; ties in key order.
  std::vector<std::pair<std::string, CloudEntry>> top_entries(
      std::uint64_t n) const {
    std::vector<std::pair<std::string, CloudEntry>> out;
    for (const auto& [sw, keyp] : by_switches_) {
      if (out.size() >= n) break;
      out.push_back({*keyp, entries_.at(*keyp)});
    }
    return out;
  }

 private:
  void insert_counted(const std::string& key, std::uint64_t count,
                      std::uint32_t switches) {
    if (key.size() + kCloudEntryOverhead > byte_budget_)
      throw BudgetError("state key does not fit in the byte budget");
    auto it = entries_.find(key);
    if (it != entries_.end()) {
      it->second.count += count;
      return;
    }
    if (entries_.size() >= f_max_) {
      auto worst = std::prev(by_switches_.end());
      if (switches >= worst->first) {
        ++discards_;
        return;
      }
      bytes_used_ -= worst->second->size() + kCloudEntryOverhead;
      entries_.erase(*worst->second);
      by_switches_.erase(worst);
      ++evictions_;
    }
    auto [pos, inserted] = entries_.emplace(key, CloudEntry{count, switches});
    by_switches_.insert({switches, &pos->first});
    bytes_used_ += key.size() + kCloudEntryOverhead;
  }

  struct PtrKeyLess {
    bool operator()(const std::pair<std::uint32_t, const std::string*>& a,
                    const std::pair<std::uint32_t, const std::string*>& b)
        const {
      if (a.first != b.first) return a.first < b.first;
      return *a.second < *b.second;
    }
  };

  std::uint64_t byte_budget_ = static_cast<std::uint64_t>(-1);
  std::uint64_t f_max_ = static_cast<std::uint64_t>(-1);
  std::uint64_t bytes_used_ = 0;
  std::uint64_t evictions_ = 0;
  std::uint64_t discards_ = 0;
  std::map<std::string, CloudEntry> entries_;
  // Mirror of entries_ ordered by (switches, key); max element = eviction
  // target, min element = frustration index.
  std::set<std::pair<std::uint32_t, const std::string*>, PtrKeyLess>
      by_switches_;
};

// Minimum switch count stored in the cloud.
inline std::uint64_t frustration_index(const FrustrationCloud& cloud) {
  return cloud.min_switches();
}

struct GraphBppOptions {
  SamplerMethod method = SamplerMethod::Bfs;
  std::uint64_t iterations = 1000;
  std::uint64_t seed = 0;
  // Byte budget for the cloud; nullopt means unbounded.
  std::optional<std::uint64_t> budget_bytes;
  unsigned workers = 1;
};

struct RunReport {
  std::uint64_t frustration_index = 0;
  std::string best_state_key;
  std::uint64_t iterations = 0;
  SamplerMethod method = SamplerMethod::Bfs;
  std::uint64_t distinct_states = 0;
  std::uint64_t evictions = 0;
  std::uint64_t failed_iterations = 0;
  double wall_time_seconds = 0;
};

namespace detail {

struct WorkerResult {
  FrustrationCloud cloud;
  std::uint32_t min_switches = static_cast<std::uint32_t>(-1);
  std::string best_key;
  std::uint64_t failed = 0;
  std::string last_error;
};

inline WorkerResult run_iterations(const SignedGraph& g,
                                   const GraphBppOptions& opt,
                                   const std::string& sample_key,
                                   std::uint64_t begin, std::uint64_t end) {
  WorkerResult r;
  if (opt.budget_bytes)
    r.cloud = FrustrationCloud(*opt.budget_bytes, sample_key);
  for (std::uint64_t i = begin; i < end; ++i) {
    try {
      SpanningTree tree = sample_tree(g, opt.method, opt.seed, i);
      BalancedState state = balance_with_tree(g, tree);
      std::string key = serialize_state(g, state.signs);
      r.cloud.insert(key, state.switch_count);
      // The running minimum lives outside the cloud so eviction can never
      // lose the answer.
      if (state.switch_count < r.min_switches) {
        r.min_switches = state.switch_count;
        r.best_key = std::move(key);
      }
    } catch (const Error& e) {
      ++r.failed;
      r.last_error = e.what();
    }
  }
  return r;
}

}  // namespace detail

// Samples opt.iterations spanning trees, balances the graph against each,
// and accumulates the serialized states in a frustration cloud. Iterations
// are split across opt.workers threads; partial clouds merge in ascending
// worker order, so results are reproducible for a fixed worker count.
// Per-iteration sampler failures are counted and only an all-fail run
// throws.
inline std::pair<RunReport, FrustrationCloud> run_graphbpp(
    const SignedGraph& g, const GraphBppOptions& opt) {
  if (opt.iterations < 1) throw ConfigError("iterations must be >= 1");
  if (opt.workers < 1) throw ConfigError("workers must be >= 1");
  auto t0 = std::chrono::steady_clock::now();

  // Size the cloud for the longest key this graph can produce (all signs
  // negative), so capacity is purely the entry count and no mid-run key
  // ever trips the byte guard.
  const std::string sample_key =
      serialize_state(g, std::vector<Sign>(g.edge_count(), Sign{-1}));
  unsigned workers = opt.workers;
  if (workers > opt.iterations)
    workers = static_cast<unsigned>(opt.iterations);

  std::vector<detail::WorkerResult> parts(workers);
  if (workers == 1) {
    parts[0] = detail::run_iterations(g, opt, sample_key, 0, opt.iterations);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    std::uint64_t chunk = opt.iterations / workers;
    std::uint64_t rem = opt.iterations % workers;
    std::uint64_t begin = 0;
    for (unsigned w = 0; w < workers; ++w) {
      std::uint64_t end = begin + chunk + (w < rem ? 1 : 0);
      threads.emplace_back([&, w, begin, end] {
        try {
          parts[w] = detail::run_iterations(g, opt, sample_key, begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
      begin = end;
    }
    for (std::thread& t : threads) t.join();
    for (std::exception_ptr& e : errors)
      if (e) std::rethrow_exception(e);
  }

  RunReport report;
  report.iterations = opt.iterations;
  report.method = opt.method;
  FrustrationCloud cloud = std::move(parts[0].cloud);
  report.frustration_index = parts[0].min_switches;
  report.best_state_key = std::move(parts[0].best_key);
  report.failed_iterations = parts[0].failed;
  std::string last_error = std::move(parts[0].last_error);
  std::uint64_t partial_evictions = 0;
  for (unsigned w = 1; w < workers; ++w) {
    cloud.merge_from(parts[w].cloud);
    partial_evictions += parts[w].cloud.evictions();
    if (parts[w].min_switches < report.frustration_index) {
      report.frustration_index = parts[w].min_switches;
      report.best_state_key = std::move(parts[w].best_key);
    }
    report.failed_iterations += parts[w].failed;
    if (!parts[w].last_error.empty()) last_error = parts[w].last_error;
  }
  if (report.failed_iterations == opt.iterations)
    throw SamplerError("every iteration failed; last error: " + last_error);

  report.distinct_states = cloud.size();
  report.evictions = cloud.evictions() + partial_evictions;
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return {std::move(report), std::move(cloud)};
}

}  // namespace sgbal
