#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "inac/experiments.hpp"

namespace fs = std::filesystem;
using namespace inac;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("inac_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  for (std::string f; std::getline(is, f, ',');) out.push_back(f);
  return out;
}

int run_bin(const std::string& args) {
  const char* bin = std::getenv("INAC_SIM_BIN");
  REQUIRE(bin != nullptr);
  const std::string cmd = std::string(bin) + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
}

}  // namespace

TEST_CASE("git blob hash") {
  CHECK(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("ranging experiment") {
  ExperimentSpec s;
  s.name = "fig9_ranging";
  s.output_dir = fresh_dir("fig9");
  const auto r = run_experiment(s);
  CHECK(r.status == 0);
  CHECK(r.verdicts.at("uo_error_nondecreasing_in_rate") == "true");
  const auto rows = lines(slurp(s.output_dir / "results.csv"));
  REQUIRE(rows.size() == 8);
  const auto head = fields(rows[0]);
  const auto col = std::find(head.begin(), head.end(), "uo_error_m") - head.begin();
  double prev = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double v = std::stod(fields(rows[i])[col]);
    CHECK(v >= prev);
    prev = v;
  }
  for (const char* f : {"results.csv", "analytic.csv", "manifest.json", "plot.py"}) CHECK(fs::exists(s.output_dir / f));
}

TEST_CASE("unknown experiment writes nothing") {
  ExperimentSpec s;
  s.name = "fig99";
  s.output_dir = fresh_dir("unknown");
  try {
    run_experiment(s);
    FAIL("expected UnknownExperiment");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownExperiment);
  }
  CHECK_FALSE(fs::exists(s.output_dir));
  CHECK(run_bin("--experiment fig99 --out " + s.output_dir.string()) != 0);
  CHECK_FALSE(fs::exists(s.output_dir));
}

TEST_CASE("bad override is rejected before output") {
  ExperimentSpec s;
  s.name = "fig9_ranging";
  s.config_overrides = {{"no_such_key", "1"}};
  s.output_dir = fresh_dir("badkey");
  CHECK_THROWS_AS(run_experiment(s), Error);
  CHECK_FALSE(fs::exists(s.output_dir));
}

TEST_CASE("manifest replay reproduces results") {
  const auto a = fresh_dir("replay_a"), b = fresh_dir("replay_b");
  REQUIRE(run_bin("--experiment fig8_mo_vs_uo --trials 30 --seed 5 --set frame_symbols=20 --out " + a.string()) == 0);
  REQUIRE(run_bin("--replay " + (a / "manifest.json").string() + " --workers 2 --out " + b.string()) == 0);
  CHECK(slurp(a / "results.csv") == slurp(b / "results.csv"));
  CHECK(slurp(a / "analytic.csv") == slurp(b / "analytic.csv"));
  const auto spec = spec_from_manifest(a / "manifest.json");
  CHECK(spec.name == "fig8_mo_vs_uo");
  CHECK(spec.seed == 5u);
  CHECK(spec.trials == 30u);
  REQUIRE(spec.base_config);
  CHECK(spec.base_config->frame_symbols == 20);
  const std::string m = slurp(a / "manifest.json");
  CHECK(m.find(git_blob_hash(slurp(a / "results.csv"))) != std::string::npos);
}

TEST_CASE("seed fallback from the environment") {
  const auto a = fresh_dir("env_a"), b = fresh_dir("env_b");
  REQUIRE(run_bin("--experiment fig6_uo_beta --trials 10 --set frame_symbols=10 --seed 77 --out " + a.string()) == 0);
  REQUIRE(run_bin("--experiment fig6_uo_beta --trials 10 --set frame_symbols=10 --out " + b.string()) == 0);
  const std::string env = "INAC_SIM_SEED=77 ";
  const char* bin = std::getenv("INAC_SIM_BIN");
  const auto c = fresh_dir("env_c");
  REQUIRE(std::system((env + bin + " --experiment fig6_uo_beta --trials 10 --set frame_symbols=10 --out " + c.string() +
                       " >/dev/null 2>&1")
                          .c_str()) == 0);
  CHECK(slurp(a / "results.csv") == slurp(c / "results.csv"));
  CHECK(slurp(a / "results.csv") != slurp(b / "results.csv"));
}

TEST_CASE("pn export, burst dump and trace") {
  const auto d = fresh_dir("tools");
  fs::create_directories(d);
  REQUIRE(run_bin("--export-pn " + (d / "pn.txt").string() + " --dump-burst " + (d / "burst.bin").string() +
                  " --trace " + (d / "trace.csv").string() + " --set frame_symbols=4") == 0);
  CHECK(fs::file_size(d / "pn.txt") > 2046);
  CHECK(fs::file_size(d / "burst.bin") >= 4u * 4092u * 8u);
  const auto tr = lines(slurp(d / "trace.csv"));
  CHECK(tr.size() == 1 + 4 + 8);
  const auto e = fresh_dir("pnfile");
  CHECK(run_bin("--experiment fig7_baselines --trials 2 --set frame_symbols=8 --pn-file " + (d / "pn.txt").string() +
                " --out " + e.string()) == 0);
  CHECK(fs::exists(e / "manifest.json"));
  CHECK(run_bin("") != 0);
}
