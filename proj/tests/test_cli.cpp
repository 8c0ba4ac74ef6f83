#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rpent/cli.hpp"

namespace fs = std::filesystem;
using rpent::Json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "rpent");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = rpent::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Json load(const fs::path& p) { return Json::parse(slurp(p)); }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rpent_cli_" + name);
  fs::remove_all(p);
  return p;
}

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("list and dims parsing") {
  using namespace rpent::cli;
  CHECK(parse_dim_pairs("2x2, 3X4").size() == 2);
  CHECK(parse_dim_pairs("3X4")[0].second == 4);
  CHECK(parse_dim_list("4,6,8").back() == 8);
  CHECK(parse_number_list("0.1,1e1")[1] == 10.0);
  CHECK_THROWS_AS(parse_dim_list("4,,6"), ConfigError);
  CHECK_THROWS_AS(parse_dim_pairs("2x"), ConfigError);
  CHECK_THROWS_AS(parse_number_list("1,abc"), ConfigError);
}

TEST_CASE("config reader rejects unknown keys and wrong types") {
  using namespace rpent::cli;
  ConfigReader r(Json{{"trials", 3}, {"extra", true}}, "cfg");
  CHECK(r.get_int("trials", 1) == 3);
  CHECK_THROWS_WITH_AS(r.finish(), doctest::Contains("extra"), ConfigError);
  ConfigReader t(Json{{"trials", "three"}}, "cfg");
  CHECK_THROWS_AS(t.get_int("trials", 1), ConfigError);
}

TEST_CASE("malformed JSON reports line and column") {
  const fs::path dir = scratch("malformed");
  write(dir / "bad.json", "{\n  \"trials\": 5,\n  \"dims\": [4,}\n");
  const Run r = run({"gram-sweep", "--config", (dir / "bad.json").string(), "--out", dir.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("bad.json:3:") != std::string::npos);
  CHECK(r.err.find("malformed JSON") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"gram-sweep", "--trials", "x"}).code == 1);
  CHECK(run({"gram-sweep", "--trials", "0", "--out", scratch("zero").string()}).code == 1);
  CHECK(run({"search", "--target", "bogus", "--out", scratch("bogus").string()}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("gram-sweep default config") {
  const fs::path dir = scratch("sweep_default");
  const Run r = run({"gram-sweep", "--seed", "42", "--out", dir.string()});
  CHECK(r.code == 0);
  const Json rep = load(dir / "gram-sweep.json");
  CHECK(rep["result"]["trials_run"] == 10000);
  CHECK(rep["result"]["failure_count"] == 0);
  CHECK(rep["config"]["master_seed"] == 42);
}

TEST_CASE("gram-sweep accounting and deterministic report") {
  const fs::path a = scratch("sweep_a");
  const fs::path b = scratch("sweep_b");
  write(a / "cfg.json", R"({"subcommand": "gram-sweep", "trials": 60, "n": [2, 3], "dims": "2x2,2x2,2x2"})");
  const Run ra = run({"gram-sweep", "--config", (a / "cfg.json").string(), "--out", a.string()});
  const Run rb = run({"gram-sweep", "--trials", "60", "--n", "2,3", "--dims", "2x2,2x2,2x2", "--jobs", "3", "--out", b.string()});
  CHECK(ra.code == 0);
  CHECK(rb.code == 0);
  Json ja = load(a / "gram-sweep.json");
  Json jb = load(b / "gram-sweep.json");
  CHECK(ja["result"]["trials_run"] == 60);
  CHECK(ja["result"]["gram_checks"] == 120);
  CHECK(ja["version"] == rpent::cli::kToolVersion);
  CHECK(ja["config"].contains("tolerance"));
  CHECK(load(a / "gram-sweep.meta.json").contains("created_utc"));
  // Only the worker count differs.
  ja["config"].erase("jobs");
  jb["config"].erase("jobs");
  CHECK(ja.dump() == jb.dump());
  const std::string first = slurp(a / "gram-sweep.json");
  CHECK(run({"gram-sweep", "--config", (a / "cfg.json").string(), "--out", a.string()}).code == 0);
  CHECK(slurp(a / "gram-sweep.json") == first);
}

TEST_CASE("byte-identical reports for the same seed") {
  const fs::path a = scratch("bytes_a");
  const fs::path b = scratch("bytes_b");
  CHECK(run({"search", "--trials", "300", "--concentration", "0.3", "--out", a.string()}).code == 0);
  CHECK(run({"search", "--trials", "300", "--concentration", "0.3", "--out", b.string()}).code == 0);
  CHECK(slurp(a / "search.json") == slurp(b / "search.json"));
  CHECK(slurp(a / "search.json").find("created") == std::string::npos);
}

TEST_CASE("output directory from the environment") {
  const fs::path dir = scratch("env");
  ::setenv(rpent::cli::kOutDirEnv, dir.string().c_str(), 1);
  const Run r = run({"cft", "--n", "2"});
  ::unsetenv(rpent::cli::kOutDirEnv);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "cft.json"));
}

TEST_CASE("search writes replayable fixtures") {
  const fs::path dir = scratch("search");
  const Run r = run({"search", "--trials", "3000", "--concentration", "0.3", "--out", dir.string()});
  CHECK(r.code == 0);
  const Json rep = load(dir / "search.json");
  REQUIRE(rep["result"]["violation_count"].get<int>() > 0);
  REQUIRE(rep["fixtures"].size() == rep["result"]["violation_count"].get<std::size_t>());
  const fs::path fixture = dir / rep["fixtures"][0].get<std::string>();
  CHECK(fixture.stem().string().size() == 16);
  CHECK(fixture.stem().string() == rpent::content_hash(slurp(fixture)));
  const Run replay = run({"search", "--replay", fixture.string(), "--out", dir.string()});
  CHECK(replay.code == 0);
  CHECK(load(dir / "search-replay.json")["reproduced"] == true);

  const Run control = run({"search", "--target", "integer_n", "--n", "2,3", "--trials", "500", "--out", dir.string()});
  CHECK(control.code == 0);
  CHECK(load(dir / "search.json")["result"]["outcome"] == "none found");
}

TEST_CASE("fermion defaults") {
  const fs::path dir = scratch("fermion");
  const Run r = run({"fermion", "--out", dir.string()});
  CHECK(r.code == 0);
  const Json rep = load(dir / "fermion.json");
  CHECK(rep["identities"]["max_wick_cauchy_relative"].get<double>() <= 1e-10);
  CHECK(rep["divisibility"]["gram_failures"] == 0);
  CHECK(fs::exists(dir / "fermion_identities.csv"));
  CHECK(fs::exists(dir / "fermion_divisibility.csv"));
}

TEST_CASE("kl built-in suite and curve input") {
  const fs::path dir = scratch("kl");
  const Run r = run({"kl", "--out", dir.string()});
  CHECK(r.code == 0);
  const Json rep = load(dir / "kl.json");
  CHECK(rep["round_trip"]["held_out_max_relative_error"].get<double>() <= 1e-6);

  std::ostringstream csv;
  csv << "x,S\n";
  csv.precision(17);
  for (int i = 0; i <= 60; ++i) {
    const double x = std::pow(10.0, -1.0 + 3.0 * i / 60.0);
    csv << x << "," << std::log(x) / 6.0 << "\n";
  }
  write(dir / "curve.csv", csv.str());
  const Run c = run({"kl", "--curve", (dir / "curve.csv").string(), "--lambda", "6", "--out", dir.string()});
  CHECK(c.code == 0);
  const Json crep = load(dir / "kl.json");
  CHECK(crep["fit"]["relative_residual"].get<double>() <= 1e-6);
  CHECK(crep["derivatives"]["rp_compatible"] == true);
  CHECK(crep["residual_vs_resolution"].size() == 3);
}

TEST_CASE("cft built-ins") {
  const fs::path dir = scratch("cft");
  CHECK(run({"cft", "--out", dir.string()}).code == 0);
  const Json rep = load(dir / "cft.json");
  CHECK(rep["derivative_inequality"]["verdict"] == "PASS");
  CHECK(rep["midpoint_inequality"]["verdict"] == "PASS");
  CHECK(rep["z_diagonal_exact"] == true);
  write(dir / "cfg.json", R"({"f": "violator"})");
  CHECK(run({"cft", "--config", (dir / "cfg.json").string(), "--out", dir.string()}).code == 2);
  CHECK(load(dir / "cft.json")["derivative_inequality"]["verdict"] == "FAIL");
}
