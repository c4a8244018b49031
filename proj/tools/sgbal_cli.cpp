// Command-line front end for the signed-graph balancing toolkit.
//
// Subcommands: balance (tree-sampling cloud), graphl (gradient descent),
// oracle (exact search), bench (method x iterations matrix), ingest-amazon
// (rating triples -> signed edge list). Exit codes are documented in the
// README: 0 ok, 1 usage/config, 2 I/O, 3 empty graph, 4 sampler failure,
// 5 divergence, 6 size guard.

#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgbal/sgbal.hpp"

namespace {

using nlohmann::json;
using namespace sgbal;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitEmptyGraph = 3;
constexpr int kExitSamplerFailure = 4;
constexpr int kExitDivergence = 5;
constexpr int kExitSizeGuard = 6;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("BALANCE_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw ConfigError("BALANCE_SEED is not a valid integer");
    }
  }
  return 0;
}

unsigned default_workers() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

// 75% of physical memory, the default cloud cap.
std::uint64_t auto_budget_bytes() {
  long pages = sysconf(_SC_PHYS_PAGES);
  long page_size = sysconf(_SC_PAGE_SIZE);
  if (pages <= 0 || page_size <= 0) return 1ull << 30;
  return static_cast<std::uint64_t>(pages) *
         static_cast<std::uint64_t>(page_size) * 3 / 4;
}

std::optional<std::uint64_t> parse_budget(const std::string& text) {
  if (text == "auto") return auto_budget_bytes();
  try {
    std::size_t pos = 0;
    std::uint64_t v = std::stoull(text, &pos);
    if (pos != text.size()) throw ConfigError("");
    return v;
  } catch (...) {
    throw ConfigError("--budget must be a byte count or 'auto'");
  }
}

struct LoadedGraph {
  SignedGraph lcc;
  PreprocessReport report;
  VertexId full_vertices = 0;
  EdgeId full_edges = 0;
};

// Reads an edge list (whitespace or comma separated, auto-detected), cleans
// it, and reduces to the largest connected component.
LoadedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw InputError("read failure: " + path);
  std::string text = buffer.str();

  InputFormat fmt = InputFormat::Whitespace;
  for (std::size_t i = 0; i < text.size();) {
    std::size_t eol = text.find('\n', i);
    std::string line =
        text.substr(i, eol == std::string::npos ? eol : eol - i);
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos && line[first] != '#' &&
        line[first] != '%') {
      if (line.find(',') != std::string::npos) fmt = InputFormat::Comma;
      break;
    }
    if (eol == std::string::npos) break;
    i = eol + 1;
  }

  std::istringstream stream(text);
  ParseResult parsed = parse_edge_list(stream, fmt);
  auto [graph, report] =
      build_signed_graph(parsed.records, parsed.invalid_lines);
  LoadedGraph out;
  out.full_vertices = graph.vertex_count();
  out.full_edges = graph.edge_count();
  out.report = report;
  out.lcc = largest_connected_component(graph).graph;
  return out;
}

json preprocess_json(const PreprocessReport& r) {
  return json{{"input_records", r.input_records},
              {"retained_edges", r.retained_edges},
              {"self_loops", r.self_loops},
              {"zero_weight", r.zero_weight},
              {"duplicate_records", r.duplicate_records},
              {"conflict_records", r.conflict_records},
              {"conflict_pairs", r.conflict_pairs},
              {"invalid_records", r.invalid_records}};
}

json graph_json(const LoadedGraph& lg) {
  return json{{"vertices", lg.full_vertices},
              {"edges", lg.full_edges},
              {"lcc_vertices", lg.lcc.vertex_count()},
              {"lcc_edges", lg.lcc.edge_count()},
              {"lcc_positive_edges", lg.lcc.positive_edge_count()},
              {"lcc_cycles", lg.lcc.edge_count() - lg.lcc.vertex_count() + 1}};
}

int write_text(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    return kExitOk;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot open output file: " << out_path << "\n";
    return kExitIo;
  }
  out << payload;
  if (!out.good()) {
    std::cerr << "error: write failure: " << out_path << "\n";
    return kExitIo;
  }
  return kExitOk;
}

struct CommonOpts {
  std::string in;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned workers = default_workers();
  std::uint64_t top_n = 10;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--in", o.in, "input edge list")->required();
  cmd->add_option("--out", o.out, "output path (default: stdout)");
  cmd->add_option("--format", o.format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--seed", o.seed, "random seed (fallback: BALANCE_SEED)")
      ->each([&o](const std::string&) { o.seed_given = true; });
  cmd->add_option("--workers", o.workers, "worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--top-n", o.top_n, "cloud entries echoed in JSON");
}

std::uint64_t resolve_seed(const CommonOpts& o) {
  return o.seed_given ? o.seed : default_seed();
}

std::string cloud_csv(const FrustrationCloud& cloud) {
  std::string out = "state_key,count,switches\n";
  for (const auto& [key, entry] : cloud.entries()) {
    out += key;
    out += ',';
    out += std::to_string(entry.count);
    out += ',';
    out += std::to_string(entry.switch_count);
    out += '\n';
  }
  return out;
}

int cmd_balance(const CommonOpts& common, const std::string& method_tok,
                std::uint64_t iters, const std::string& budget_text) {
  auto method = method_from_token(method_tok);
  if (!method) throw ConfigError("unknown method token: " + method_tok);
  GraphBppOptions opt;
  opt.method = *method;
  opt.iterations = iters;
  opt.seed = resolve_seed(common);
  opt.budget_bytes = parse_budget(budget_text);
  opt.workers = common.workers;

  LoadedGraph lg = load_graph(common.in);
  auto [report, cloud] = run_graphbpp(lg.lcc, opt);

  std::string payload;
  if (common.format == "csv") {
    payload = cloud_csv(cloud);
  } else {
    json top = json::array();
    for (const auto& [key, entry] : cloud.top_entries(common.top_n))
      top.push_back({{"state_key", key},
                     {"count", entry.count},
                     {"switches", entry.switch_count}});
    json j{{"command", "balance"},
           {"input", common.in},
           {"method", std::string(method_token(report.method))},
           {"iterations", report.iterations},
           {"seed", opt.seed},
           {"workers", opt.workers},
           {"budget_bytes", *opt.budget_bytes},
           {"f_max", cloud.f_max()},
           {"graph", graph_json(lg)},
           {"preprocess", preprocess_json(lg.report)},
           {"frustration_index", report.frustration_index},
           {"best_state_key", report.best_state_key},
           {"distinct_states", report.distinct_states},
           {"evictions", report.evictions},
           {"failed_iterations", report.failed_iterations},
           {"wall_time_seconds", report.wall_time_seconds},
           {"top_states", top}};
    payload = j.dump(2) + "\n";
  }
  std::cerr << "frustration index " << report.frustration_index << " | "
            << report.distinct_states << " distinct states | "
            << report.wall_time_seconds << " s\n";
  return write_text(common.out, payload);
}

int cmd_graphl(const CommonOpts& common, double alpha, std::uint64_t lambda,
               std::uint32_t restarts, std::int64_t trace_limit) {
  GraphLConfig cfg;
  cfg.alpha = alpha;
  cfg.lambda = lambda;
  cfg.restarts = restarts;
  cfg.seed = resolve_seed(common);
  if (cfg.alpha <= 0) throw ConfigError("--alpha must be positive");
  if (cfg.restarts < 1) throw ConfigError("--restarts must be >= 1");

  LoadedGraph lg = load_graph(common.in);
  auto t0 = std::chrono::steady_clock::now();
  GraphLResult result = run_graphl(lg.lcc, cfg);
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  std::string payload;
  if (common.format == "csv") {
    // Flipped edges, original vertex ids.
    std::string out = "src,tgt,old_sign,new_sign\n";
    for (EdgeId e = 0; e < lg.lcc.edge_count(); ++e) {
      if (result.balanced_signs[e] == lg.lcc.edge(e).sign) continue;
      const Edge& ed = lg.lcc.edge(e);
      out += std::to_string(lg.lcc.label(ed.src)) + ',' +
             std::to_string(lg.lcc.label(ed.tgt)) + ',' +
             std::to_string(int(ed.sign)) + ',' +
             std::to_string(int(result.balanced_signs[e])) + '\n';
    }
    payload = out;
  } else {
    json trace = json::array();
    std::size_t keep = result.loss_trace.size();
    if (trace_limit >= 0)
      keep =
          std::min<std::size_t>(keep, static_cast<std::size_t>(trace_limit));
    for (std::size_t i = 0; i < keep; ++i) trace.push_back(result.loss_trace[i]);
    json j{{"command", "graphl"},
           {"input", common.in},
           {"alpha", cfg.alpha},
           {"lambda", cfg.lambda},
           {"restarts", cfg.restarts},
           {"seed", cfg.seed},
           {"graph", graph_json(lg)},
           {"preprocess", preprocess_json(lg.report)},
           {"frustration", result.frustration},
           {"restart_index", result.restart_index},
           {"restart_frustrations", result.restart_frustrations},
           {"loss_trace", trace},
           {"loss_trace_total_updates", result.loss_trace.size()},
           {"wall_time_seconds", seconds}};
    payload = j.dump(2) + "\n";
  }
  std::cerr << "frustration " << result.frustration << " | restart "
            << result.restart_index << " | " << seconds << " s\n";
  return write_text(common.out, payload);
}

int cmd_oracle(const CommonOpts& common, bool force) {
  LoadedGraph lg = load_graph(common.in);
  OracleResult result =
      exact_frustration(lg.lcc, force ? 64 : kOracleDefaultMaxVertices);

  std::string payload;
  if (common.format == "csv") {
    std::string out = "vertex,side\n";
    for (VertexId v = 0; v < lg.lcc.vertex_count(); ++v)
      out += std::to_string(lg.lcc.label(v)) + ',' +
             std::to_string(int(result.best_theta[v])) + '\n';
    payload = out;
  } else {
    json theta = json::array();
    for (VertexId v = 0; v < lg.lcc.vertex_count(); ++v)
      theta.push_back(
          {{"vertex", lg.lcc.label(v)}, {"side", int(result.best_theta[v])}});
    json j{{"command", "oracle"},
           {"input", common.in},
           {"graph", graph_json(lg)},
           {"frustration", result.frustration},
           {"assignments_checked", result.assignments_checked},
           {"theta", theta}};
    payload = j.dump(2) + "\n";
  }
  std::cerr << "exact frustration " << result.frustration << " over "
            << result.assignments_checked << " assignments\n";
  return write_text(common.out, payload);
}

struct BenchCell {
  SamplerMethod method;
  std::uint64_t iterations;
};

std::vector<BenchCell> parse_matrix(const std::string& text) {
  std::vector<BenchCell> cells;
  if (text.empty()) return cells;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t colon = item.find(':');
    if (colon == std::string::npos)
      throw ConfigError("matrix cell must be method:iterations, got: " + item);
    std::string tok = item.substr(0, colon);
    auto method = method_from_token(tok);
    if (!method) throw ConfigError("unknown method token: " + tok);
    std::uint64_t k = 0;
    try {
      std::size_t pos = 0;
      k = std::stoull(item.substr(colon + 1), &pos);
      if (pos != item.size() - colon - 1 || k == 0) throw ConfigError("");
    } catch (...) {
      throw ConfigError("bad iteration count in matrix cell: " + item);
    }
    cells.push_back({*method, k});
  }
  return cells;
}

int cmd_bench(const CommonOpts& common, const std::string& matrix_text,
              const std::string& budget_text) {
  // Validate the whole matrix before any cell runs.
  std::vector<BenchCell> cells = parse_matrix(matrix_text);
  std::optional<std::uint64_t> budget = parse_budget(budget_text);

  std::string csv =
      "method,k,frustration,distinct_states,seconds_per_iteration,"
      "total_seconds\n";
  std::size_t failures = 0;
  if (!cells.empty()) {
    LoadedGraph lg = load_graph(common.in);
    for (const BenchCell& cell : cells) {
      GraphBppOptions opt;
      opt.method = cell.method;
      opt.iterations = cell.iterations;
      opt.seed = resolve_seed(common);
      opt.budget_bytes = budget;
      opt.workers = common.workers;
      try {
        auto [report, cloud] = run_graphbpp(lg.lcc, opt);
        csv += std::string(method_token(cell.method)) + ',' +
               std::to_string(cell.iterations) + ',' +
               std::to_string(report.frustration_index) + ',' +
               std::to_string(report.distinct_states) + ',' +
               std::to_string(report.wall_time_seconds /
                              double(cell.iterations)) +
               ',' + std::to_string(report.wall_time_seconds) + '\n';
      } catch (const Error& e) {
        std::cerr << "cell " << method_token(cell.method) << ":"
                  << cell.iterations << " failed: " << e.what() << "\n";
        csv += std::string(method_token(cell.method)) + ',' +
               std::to_string(cell.iterations) + ",NA,NA,NA,NA\n";
        ++failures;
      }
    }
  }
  int rc = write_text(common.out, csv);
  if (rc != kExitOk) return rc;
  return (!cells.empty() && failures == cells.size()) ? kExitSamplerFailure
                                                      : kExitOk;
}

int cmd_ingest_amazon(const CommonOpts& common) {
  std::ifstream in(common.in);
  if (!in) throw InputError("cannot open input file: " + common.in);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  InputFormat fmt = text.find(',') != std::string::npos
                        ? InputFormat::Comma
                        : InputFormat::Whitespace;
  std::istringstream stream(text);
  ParseResult parsed = parse_edge_list(stream, fmt);

  // Items live in their own id space: offset them past the largest user id.
  std::int64_t max_user = -1;
  for (const RawEdgeRecord& r : parsed.records)
    max_user = std::max(max_user, r.src);
  std::vector<RawEdgeRecord> offset = parsed.records;
  for (RawEdgeRecord& r : offset) r.tgt += max_user + 1;

  auto [signed_records, amazon_report] = amazon_ratings_to_records(offset);
  auto [graph, report] = build_signed_graph(
      signed_records, parsed.invalid_lines + amazon_report.invalid_records);

  std::string payload;
  payload.reserve(16 * graph.edge_count());
  for (const Edge& e : graph.edges())
    payload += std::to_string(graph.label(e.src)) + ' ' +
               std::to_string(graph.label(e.tgt)) + ' ' +
               std::to_string(int(e.sign)) + '\n';

  json summary{{"command", "ingest-amazon"},
               {"input", common.in},
               {"ratings",
                {{"input_records", amazon_report.input_records},
                 {"positive", amazon_report.positive},
                 {"negative", amazon_report.negative},
                 {"neutral_dropped", amazon_report.neutral_dropped},
                 {"invalid_records", amazon_report.invalid_records}}},
               {"preprocess", preprocess_json(report)},
               {"vertices", graph.vertex_count()},
               {"edges", graph.edge_count()}};
  std::cerr << summary.dump(2) << "\n";
  return write_text(common.out, payload);
}

int dispatch(int argc, char** argv) {
  CLI::App app{"signed-graph balancing toolkit"};
  app.require_subcommand(1);

  CommonOpts bal_opts;
  std::string bal_method = "bfs";
  std::uint64_t bal_iters = 1000;
  std::string bal_budget = "auto";
  CLI::App* balance = app.add_subcommand(
      "balance", "approximate the frustration index by tree sampling");
  add_common(balance, bal_opts);
  balance->add_option("--method", bal_method,
                      "bfs|dfs|rdfs|ab|kruskal|prim|hybrid");
  balance->add_option("--iters", bal_iters, "sampling iterations")
      ->check(CLI::PositiveNumber);
  balance->add_option("--budget", bal_budget, "cloud byte budget or 'auto'");

  CommonOpts gl_opts;
  double gl_alpha = 0.001;
  std::uint64_t gl_lambda = 1000;
  std::uint32_t gl_restarts = 5;
  std::int64_t gl_trace_limit = -1;
  CLI::App* graphl = app.add_subcommand(
      "graphl", "approximate the frustration index by gradient descent");
  add_common(graphl, gl_opts);
  graphl->add_option("--alpha", gl_alpha, "learning rate");
  graphl->add_option("--lambda", gl_lambda, "gradient updates");
  graphl->add_option("--restarts", gl_restarts, "independent restarts");
  graphl->add_option("--trace-limit", gl_trace_limit,
                     "loss-trace entries kept in JSON (-1 = all)");

  CommonOpts or_opts;
  bool or_force = false;
  CLI::App* oracle = app.add_subcommand(
      "oracle", "exact frustration index by exhaustive search");
  add_common(oracle, or_opts);
  oracle->add_flag("--force", or_force, "lift the 22-vertex size guard");

  CommonOpts bench_opts;
  std::string bench_matrix;
  std::string bench_budget = "auto";
  CLI::App* bench =
      app.add_subcommand("bench", "run a method:iterations matrix, emit CSV");
  add_common(bench, bench_opts);
  bench->add_option("--matrix", bench_matrix,
                    "comma list of method:iterations cells");
  bench->add_option("--budget", bench_budget, "cloud byte budget or 'auto'");

  CommonOpts am_opts;
  CLI::App* amazon = app.add_subcommand(
      "ingest-amazon", "turn (user, item, rating) lines into a signed list");
  add_common(amazon, am_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (balance->parsed())
    return cmd_balance(bal_opts, bal_method, bal_iters, bal_budget);
  if (graphl->parsed())
    return cmd_graphl(gl_opts, gl_alpha, gl_lambda, gl_restarts,
                      gl_trace_limit);
  if (oracle->parsed()) return cmd_oracle(or_opts, or_force);
  if (bench->parsed()) return cmd_bench(bench_opts, bench_matrix, bench_budget);
  if (amazon->parsed()) return cmd_ingest_amazon(am_opts);
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitIo;
  } catch (const EmptyGraphError& e) {
    std::cerr << "empty graph: " << e.what() << "\n";
    return kExitEmptyGraph;
  } catch (const SamplerError& e) {
    std::cerr << "sampling failed: " << e.what() << "\n";
    return kExitSamplerFailure;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const SizeGuardError& e) {
    std::cerr << "size guard: " << e.what() << "\n";
    return kExitSizeGuard;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  }
}
