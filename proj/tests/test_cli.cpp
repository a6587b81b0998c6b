#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const fs::path& scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "triehh_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path out = scratch_dir() / ("out" + std::to_string(counter));
  const fs::path err = scratch_dir() / ("err" + std::to_string(counter));
  ++counter;
  const std::string command = std::string(TRIEHH_CLI_PATH) + " " + args + " > " + out.string() +
                              " 2> " + err.string();
  const int status = std::system(command.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out);
  result.err = slurp(err);
  return result;
}

}  // namespace

TEST_CASE("params prints the derived tuple as JSON plus a table row") {
  const CliResult r =
      run_cli("params --n 1000000 --epsilon 2 --max-length 10 --delta-mode invn2");
  REQUIRE(r.exit_code == 0);
  const auto json_end = r.out.find("\n}");
  REQUIRE(json_end != std::string::npos);
  const nlohmann::json j = nlohmann::json::parse(r.out.substr(0, json_end + 2));
  CHECK(j.at("theta") == 15);
  CHECK(std::abs(j.at("gamma").get<double>() - 12.08) <= 0.01);
  CHECK(r.out.find("theta=15") != std::string::npos);
}

TEST_CASE("params rejects a population that cannot reach the target") {
  const CliResult r = run_cli("params --n 100 --epsilon 2 --max-length 10 --delta-mode invn2");
  CHECK(r.exit_code == 1);
  const nlohmann::json err = nlohmann::json::parse(r.err);
  CHECK(err.at("kind") == "validation");
  CHECK(err.at("error").get<std::string>().find("gamma >= 1") != std::string::npos);
}

TEST_CASE("gen validates its flags") {
  CHECK(run_cli("gen --fixture sentiment140-top100 --n 0").exit_code == 1);
  CHECK(run_cli("gen --fixture bogus --n 10").exit_code == 1);
  CHECK(run_cli("gen --n 10").exit_code == 1);  // missing --fixture
}

TEST_CASE("unknown flags are rejected with a validation error") {
  const CliResult r = run_cli("params --n 1000 --frobnicate");
  CHECK(r.exit_code == 1);
  CHECK(nlohmann::json::parse(r.err).at("kind") == "validation");
}

TEST_CASE("version and machine-readable help") {
  const CliResult version = run_cli("--version");
  CHECK(version.exit_code == 0);
  CHECK(version.out.find("0.1.0") != std::string::npos);

  const CliResult help = run_cli("--help-json");
  REQUIRE(help.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(help.out);
  CHECK(j.at("subcommands").size() == 6);
  std::vector<std::string> names;
  for (const auto& sub : j.at("subcommands")) names.push_back(sub.at("name"));
  for (const char* expected : {"params", "simulate", "analyze-rate", "min-pop", "ingest", "gen"}) {
    CHECK(std::find(names.begin(), names.end(), expected) != names.end());
  }
}

TEST_CASE("repeated invocations are byte-identical") {
  const std::string a = run_cli("params --n 100000 --epsilon 2 --max-length 10").out;
  const std::string b = run_cli("params --n 100000 --epsilon 2 --max-length 10").out;
  CHECK(a == b);

  const std::string g1 = run_cli("gen --fixture oov-top100 --n 100 --seed 9").out;
  const std::string g2 = run_cli("gen --fixture oov-top100 --n 100 --seed 9").out;
  CHECK(!g1.empty());
  CHECK(g1 == g2);
  const std::string g3 = run_cli("gen --fixture oov-top100 --n 100 --seed 10").out;
  CHECK(g1 != g3);
}

TEST_CASE("ingest and simulate cooperate end to end") {
  const fs::path csv = scratch_dir() / "tiny.csv";
  {
    std::ofstream out(csv);
    for (int u = 0; u < 40; ++u) {
      out << "user" << u << ",hello world\n";
    }
  }
  const fs::path dataset = scratch_dir() / "tiny.jsonl";
  const CliResult ingest =
      run_cli("ingest --input " + csv.string() + " --output " + dataset.string());
  REQUIRE(ingest.exit_code == 0);
  CHECK(slurp(dataset).find("hello$") != std::string::npos);

  // 40 users cannot support any valid parameterization: validation error.
  const CliResult sim = run_cli("simulate --dataset " + dataset.string() + " --runs 2");
  CHECK(sim.exit_code == 1);
  CHECK(nlohmann::json::parse(sim.err).at("kind") == "validation");
}

TEST_CASE("simulate can emit per-run reports with round logs") {
  const fs::path dataset = scratch_dir() / "gen.jsonl";
  REQUIRE(run_cli("gen --fixture sentiment140-top100 --n 10000 --seed 4 --max-length 8 --output " +
                  dataset.string())
              .exit_code == 0);
  const fs::path runs = scratch_dir() / "runs.jsonl";
  const CliResult sim = run_cli("simulate --dataset " + dataset.string() +
                                " --runs 3 --epsilon 4 --seed 2 --round-logs --report-runs " +
                                runs.string() + " --output " + (scratch_dir() / "m.json").string());
  REQUIRE(sim.exit_code == 0);
  std::ifstream in(runs);
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    const nlohmann::json run = nlohmann::json::parse(line);
    CHECK(run.at("schema_version") == 1);
    CHECK(run.at("rounds").size() == run.at("rounds_executed").get<std::size_t>());
    ++count;
  }
  CHECK(count == 3);

  const nlohmann::json metrics =
      nlohmann::json::parse(slurp(scratch_dir() / "m.json"));
  CHECK(metrics.at("kanonymity_violations") == 0);
  CHECK(metrics.at("params").at("theta") == 12);
}

TEST_CASE("analyze-rate and min-pop emit CSV") {
  const CliResult rate =
      run_cli("analyze-rate --n 100000 --epsilon 2 --freq-min 0.005 --freq-max 0.05 --bins 4");
  REQUIRE(rate.exit_code == 0);
  std::istringstream lines(rate.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "frequency,rate");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 4);

  const CliResult pop = run_cli("min-pop --freq 0.05 --freq 0.02 --target-rate 0.9 --epsilon 4");
  REQUIRE(pop.exit_code == 0);
  CHECK(pop.out.find("frequency,min_population") == 0);

  const CliResult missing = run_cli("simulate --dataset /nonexistent.jsonl");
  CHECK(missing.exit_code == 2);  // flags fine, environment broken
}
