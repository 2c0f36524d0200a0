#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string output;
};

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() /
                 ("spatnet_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

fs::path work_file(const std::string& name) { return work_dir() / name; }

RunResult run_cli(const std::string& args) {
  static int call = 0;
  const fs::path log = work_file("out" + std::to_string(call++) + ".log");
  const std::string cmd = std::string(SPATNET_CLI_PATH) + " " + args + " > " +
                          log.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

int count_lines_with(const std::string& text, const std::string& needle) {
  int n = 0;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line))
    if (line.find(needle) != std::string::npos) ++n;
  return n;
}

std::string make_scenario(const std::string& name, int n, int seed) {
  const fs::path f = work_file(name);
  const auto r = run_cli("gen --n " + std::to_string(n) + " --seed " +
                         std::to_string(seed) + " --out " + f.string());
  REQUIRE(r.code == 0);
  return f.string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help and usage errors use exit codes 0 and 1") {
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("").code == 1);                      // missing subcommand
  CHECK(run_cli("frobnicate").code == 1);            // unknown subcommand
  CHECK(run_cli("gen --out x.json").code == 1);      // neither --config nor --n
  CHECK(run_cli("gen --n 10").code == 1);            // missing --out
  CHECK(run_cli("query --scenario nope.json --type bogus --center 0,0 "
                "--radius 5")
            .code == 1);                             // bad enum value
  const std::string scn = make_scenario("usage.json", 20, 1);
  CHECK(run_cli("query --scenario " + scn + " --type radius").code == 1);
  CHECK(run_cli("query --scenario " + scn +
                " --type radius --center zap --radius 5")
            .code == 1);                             // malformed point
}

TEST_CASE("missing and malformed files exit 2") {
  CHECK(run_cli("validate --scenario does_not_exist.json").code == 2);
  const fs::path bad = work_file("bad.json");
  std::ofstream(bad) << "this is not json";
  CHECK(run_cli("validate --scenario " + bad.string()).code == 2);
}

TEST_CASE("generated scenarios validate cleanly") {
  const std::string scn = make_scenario("fresh.json", 200, 3);
  const auto r = run_cli("validate --scenario " + scn);
  CHECK(r.code == 0);
  CHECK(r.output.find("scenario ok") != std::string::npos);
  CHECK(r.output.find("200 nodes") != std::string::npos);
}

TEST_CASE("duplicate node ids are rejected naming the id") {
  const fs::path dup = work_file("dup.json");
  std::ofstream(dup) << R"({"nodes": [
    {"id": 7, "kind": "blockage", "x": 0, "y": 0},
    {"id": 7, "kind": "blockage", "x": 5, "y": 5}
  ]})";
  const auto r = run_cli("validate --scenario " + dup.string());
  CHECK(r.code == 2);
  CHECK(r.output.find("7") != std::string::npos);
}

TEST_CASE("gen accepts a config file and rejects a broken one") {
  const fs::path cfg = work_file("cfg.json");
  std::ofstream(cfg) << R"({"sbs_density_per_km2": 0, "mbs_count": 1,
                            "ue_count": 5, "seed": 9})";
  const fs::path scn = work_file("from_cfg.json");
  const auto r =
      run_cli("gen --config " + cfg.string() + " --out " + scn.string());
  CHECK(r.code == 0);
  CHECK(r.output.find("wrote 6 nodes") != std::string::npos);
  CHECK(run_cli("validate --scenario " + scn.string()).code == 0);

  const fs::path broken = work_file("broken_cfg.json");
  std::ofstream(broken) << R"({"sbs_densty": 5})";
  const auto bad =
      run_cli("gen --config " + broken.string() + " --out x.json");
  CHECK(bad.code == 2);
  CHECK(bad.output.find("sbs_densty") != std::string::npos);
}

TEST_CASE("same seed generates the same file") {
  const std::string a = make_scenario("seed_a.json", 64, 11);
  const std::string b = make_scenario("seed_b.json", 64, 11);
  std::stringstream sa;
  sa << std::ifstream(a).rdbuf();
  std::stringstream sb;
  sb << std::ifstream(b).rdbuf();
  CHECK(sa.str() == sb.str());
}

TEST_CASE("radius query prints node lines plus a stats summary") {
  const std::string scn = make_scenario("radius.json", 100, 4);
  const auto r = run_cli("query --scenario " + scn +
                         " --type radius --center 500,500 --radius 1500");
  CHECK(r.code == 0);
  // the whole square fits in the ball, so every node matches
  CHECK(count_lines_with(r.output, "\"id\"") == 100);
  CHECK(count_lines_with(r.output, "\"matches\":100") == 1);
  CHECK(r.output.find("nodes_visited") != std::string::npos);
}

TEST_CASE("knn query returns exactly k records nearest first") {
  const std::string scn = make_scenario("knn.json", 100, 4);
  const auto r = run_cli("query --scenario " + scn +
                         " --type knn --center 100,100 --k 5");
  CHECK(r.code == 0);
  CHECK(count_lines_with(r.output, "\"id\"") == 5);
  CHECK(count_lines_with(r.output, "\"matches\":5") == 1);
}

TEST_CASE("sector and los queries run end to end") {
  const std::string scn = make_scenario("sector.json", 150, 5);
  const auto r = run_cli("query --scenario " + scn +
                         " --type sector --origin 0,0 --boresight 45 "
                         "--beamwidth 90 --range 2000");
  CHECK(r.code == 0);
  CHECK(count_lines_with(r.output, "\"id\"") > 0);

  const auto los = run_cli("query --scenario " + scn +
                           " --type los --from 0,0 --to 1000,1000");
  CHECK(los.code == 0);
  // pure transceiver deployment: nothing can block
  CHECK(los.output.find("\"clear\":true") != std::string::npos);
}

TEST_CASE("snr with both methods reports agreement and writes the csv") {
  const std::string scn = make_scenario("snr.json", 120, 6);
  const fs::path csv = work_file("links.csv");
  const auto r = run_cli("snr --scenario " + scn + " --method both --out " +
                         csv.string());
  CHECK(r.code == 0);
  CHECK(r.output.find("agree") != std::string::npos);
  std::ifstream in(csv);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "tx_id,rx_id,distance_m,snr_db,sinr_db,num_interferers");
  std::string first_row;
  CHECK(std::getline(in, first_row));
}

TEST_CASE("sinr fills the interference columns") {
  const std::string scn = make_scenario("sinr.json", 120, 6);
  const fs::path csv = work_file("sinr_links.csv");
  const auto r = run_cli("sinr --scenario " + scn +
                         " --method spatial --out " + csv.string());
  CHECK(r.code == 0);
  std::stringstream ss;
  ss << std::ifstream(csv).rdbuf();
  // every data row carries a sinr value: no ",," gap anywhere
  CHECK(ss.str().find(",,") == std::string::npos);
}

TEST_CASE("bench writes records and prints slopes for three or more n") {
  const fs::path csv = work_file("bench.csv");
  const auto r = run_cli("bench --task load --n-list 50,100,200 --reps 2 "
                         "--seed 2 --out " + csv.string());
  CHECK(r.code == 0);
  CHECK(r.output.find("slope load/array") != std::string::npos);
  CHECK(r.output.find("slope load/spatial") != std::string::npos);
  std::ifstream in(csv);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "task,method,n,rep,wall_seconds,visited_nodes");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2 * 3 * 2);
}

}  // TEST_SUITE
