// End-to-end tests against the built CLI binary. The binary path and the
// repo data directory arrive via SGBAL_BIN / SGBAL_DATA (set by CTest).

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string bin_path() {
  const char* p = std::getenv("SGBAL_BIN");
  EXPECT_NE(p, nullptr) << "SGBAL_BIN not set";
  return p ? p : "";
}

std::string data_dir() {
  const char* p = std::getenv("SGBAL_DATA");
  EXPECT_NE(p, nullptr) << "SGBAL_DATA not set";
  return p ? p : "";
}

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("sgbal_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run(const std::string& args) {
  fs::path out = scratch_dir() / "stdout.txt";
  fs::path err = scratch_dir() / "stderr.txt";
  std::string cmd = bin_path() + " " + args + " > " + out.string() + " 2> " +
                    err.string();
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path write_file(const std::string& name, const std::string& body) {
  fs::path p = scratch_dir() / name;
  std::ofstream out(p);
  out << body;
  return p;
}

std::string strip_timing(const std::string& text) {
  static const std::regex timing(
      "\"(wall_time_seconds|seconds_per_iteration|total_seconds)\"[^,}\n]*");
  return std::regex_replace(text, timing, "");
}

TEST(CliBalance, HighlandJsonReport) {
  RunResult r = run("balance --in " + data_dir() +
                    "/highland.txt --method bfs --iters 1000 --seed 1 "
                    "--workers 1");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["frustration_index"], 7);
  EXPECT_EQ(j["method"], "bfs");
  EXPECT_EQ(j["iterations"], 1000);
  EXPECT_EQ(j["graph"]["lcc_vertices"], 16);
  EXPECT_EQ(j["graph"]["lcc_edges"], 58);
  EXPECT_EQ(j["graph"]["lcc_cycles"], 43);
  // Fields promised by docs/schemas.md.
  for (const char* field :
       {"best_state_key", "distinct_states", "evictions",
        "failed_iterations", "wall_time_seconds", "top_states", "preprocess",
        "seed", "budget_bytes", "f_max"})
    EXPECT_TRUE(j.contains(field)) << field;
  EXPECT_TRUE(j["top_states"].is_array());
  EXPECT_GT(j["top_states"].size(), 0u);
  EXPECT_EQ(j["top_states"][0]["switches"], 7);
}

TEST(CliBalance, MissingInputExitsTwo) {
  RunResult r = run("balance --in /nonexistent/missing.txt");
  EXPECT_EQ(r.exit_code, 2);
}

TEST(CliBalance, TreeGraphIndexZero) {
  fs::path p = write_file("tree.txt", "0 1 -1\n1 2 1\n2 3 -1\n");
  RunResult r = run("balance --in " + p.string() + " --method dfs --iters 5");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["frustration_index"], 0);
  EXPECT_EQ(j["distinct_states"], 1);
}

TEST(CliBalance, CommentOnlyInputExitsThree) {
  fs::path p = write_file("comments.txt", "# nothing\n% here\n");
  RunResult r = run("balance --in " + p.string());
  EXPECT_EQ(r.exit_code, 3);
}

TEST(CliBalance, DeterministicOutputModuloTiming) {
  std::string args = "balance --in " + data_dir() +
                     "/sampson18.txt --method rdfs --iters 200 --seed 9 "
                     "--workers 1";
  RunResult a = run(args);
  RunResult b = run(args);
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(strip_timing(a.out), strip_timing(b.out));
}

TEST(CliBalance, CsvCloudDump) {
  RunResult r = run("balance --in " + data_dir() +
                    "/highland.txt --iters 50 --seed 2 --format csv");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out.substr(0, 25), "state_key,count,switches\n");
}

TEST(CliBalance, SeedFallsBackToEnvVar) {
  setenv("BALANCE_SEED", "4242", 1);
  RunResult r = run("balance --in " + data_dir() +
                    "/highland.txt --iters 10 --workers 1");
  unsetenv("BALANCE_SEED");
  ASSERT_EQ(r.exit_code, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["seed"], 4242);
}

TEST(CliGraphl, SinglePositiveEdge) {
  fs::path p = write_file("one_edge.txt", "0 1 1\n");
  RunResult r = run("graphl --in " + p.string() + " --seed 3");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["frustration"], 0);
  EXPECT_EQ(j["restart_frustrations"].size(), 5u);
}

TEST(CliGraphl, NegativeAlphaIsConfigError) {
  RunResult r =
      run("graphl --in " + data_dir() + "/highland.txt --alpha -1");
  EXPECT_EQ(r.exit_code, 1);
}

TEST(CliGraphl, TraceLimitAndFlippedCsv) {
  RunResult r = run("graphl --in " + data_dir() +
                    "/highland.txt --seed 5 --trace-limit 4");
  ASSERT_EQ(r.exit_code, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["loss_trace"].size(), 4u);
  EXPECT_EQ(j["loss_trace_total_updates"], 1000);

  RunResult c = run("graphl --in " + data_dir() +
                    "/highland.txt --seed 5 --format csv");
  ASSERT_EQ(c.exit_code, 0);
  EXPECT_EQ(c.out.substr(0, 26), "src,tgt,old_sign,new_sign\n");
}

TEST(CliOracle, HighlandExactSeven) {
  RunResult r = run("oracle --in " + data_dir() + "/highland.txt");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["frustration"], 7);
  EXPECT_EQ(j["assignments_checked"], 32768);
  EXPECT_EQ(j["theta"].size(), 16u);
}

TEST(CliOracle, SizeGuardAndForce) {
  std::string body;
  for (int v = 0; v + 1 < 30; ++v)
    body += std::to_string(v) + " " + std::to_string(v + 1) + " 1\n";
  fs::path p = write_file("path30.txt", body);
  RunResult guarded = run("oracle --in " + p.string());
  EXPECT_EQ(guarded.exit_code, 6);
  RunResult forced = run("oracle --in " + p.string() + " --force");
  ASSERT_EQ(forced.exit_code, 0);
  EXPECT_EQ(json::parse(forced.out)["frustration"], 0);
}

TEST(CliOracle, CsvTheta) {
  RunResult r =
      run("oracle --in " + data_dir() + "/highland.txt --format csv");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out.substr(0, 12), "vertex,side\n");
}

TEST(CliBench, EmptyMatrixHeaderOnly) {
  RunResult r = run("bench --in " + data_dir() + "/highland.txt");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out,
            "method,k,frustration,distinct_states,seconds_per_iteration,"
            "total_seconds\n");
}

TEST(CliBench, TypoRejectedBeforeAnyRun) {
  fs::path out = scratch_dir() / "bench_typo.csv";
  fs::remove(out);
  RunResult r = run("bench --in " + data_dir() +
                    "/highland.txt --matrix prims:100 --out " + out.string());
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_FALSE(fs::exists(out));
}

TEST(CliBench, SampsonMatrixRows) {
  RunResult r = run("bench --in " + data_dir() +
                    "/sampson18.txt --matrix bfs:100,rdfs:100 --seed 4");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line,
            "method,k,frustration,distinct_states,seconds_per_iteration,"
            "total_seconds");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    std::istringstream cells(line);
    std::string method, k, fr;
    std::getline(cells, method, ',');
    std::getline(cells, k, ',');
    std::getline(cells, fr, ',');
    EXPECT_GE(std::stoull(fr), 39u) << line;  // exact optimum lower-bounds
  }
  EXPECT_EQ(rows, 2);
}

TEST(CliIngestAmazon, RatingClasses) {
  fs::path p = write_file("ratings.txt",
                          "1 1 5\n1 2 4\n2 1 3\n2 2 2\n3 1 1\n3 2 0\n3 3 7\n");
  fs::path out = scratch_dir() / "amazon_edges.txt";
  RunResult r =
      run("ingest-amazon --in " + p.string() + " --out " + out.string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  json summary = json::parse(r.err);
  EXPECT_EQ(summary["ratings"]["positive"], 2);
  EXPECT_EQ(summary["ratings"]["negative"], 2);
  EXPECT_EQ(summary["ratings"]["neutral_dropped"], 2);
  EXPECT_EQ(summary["ratings"]["invalid_records"], 1);
  // Items offset past the largest user id (3): item 1 -> 5, item 2 -> 6.
  std::string edges = slurp(out);
  EXPECT_NE(edges.find("1 5 1"), std::string::npos);
  EXPECT_NE(edges.find("3 5 -1"), std::string::npos);
}

TEST(CliUsage, MissingSubcommand) {
  RunResult r = run("");
  EXPECT_EQ(r.exit_code, 1);
}

}  // namespace
