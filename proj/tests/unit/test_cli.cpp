#include <doctest.h>

#include "levytrim_cli/cli.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using levytrim::cli::run;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const char* env = std::getenv("LEVYTRIM_TEST_TMP");
  const fs::path base = env ? fs::path(env) : fs::temp_directory_path() / "levytrim_cli_tests";
  const fs::path dir = base / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("help lists the defaults") {
  auto h = call({"verify", "rep", "--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("50000") != std::string::npos);
  CHECK(h.out.find("--count-budget") != std::string::npos);
  CHECK(h.out.find("1.2") != std::string::npos);
  h = call({"simulate", "--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("1000") != std::string::npos);
  CHECK(h.out.find("--dump-paths") != std::string::npos);
  h = call({"doa", "--help"});
  CHECK(h.out.find("9") != std::string::npos);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("bad input exits with 2") {
  const auto dir = scratch("bad");
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"verify", "rep", "--measure", "gamma-type", "--n", "10", "--out", dir.string()}).code == 2);
  CHECK(call({"verify", "rep", "--measure", "no-such-measure", "--out", dir.string()}).code == 2);
  CHECK(call({"verify", "rep", "--measure", "gamma-type", "--modulus", "--r", "1", "--s", "1", "--n",
              "200", "--out", dir.string()})
            .code == 2);
  CHECK(call({"verify", "convergence", "--measure", "gaussian", "--t-grid", "0.001,0.1", "--n", "200",
              "--out", dir.string()})
            .code == 2);
  CHECK(call({"simulate", "--measure", "gamma-type", "--t", "-1", "--out", dir.string()}).code == 2);
  CHECK(call({"simulate", "--measure", "gamma-type", "--n", "abc"}).code == 2);
  const auto missing = call({"doa", "--measure", (dir / "missing.json").string()});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("error") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "verify-rep.json"));
}

TEST_CASE("measure list and describe") {
  const auto list = call({"measure", "list"});
  CHECK(list.code == 0);
  for (const char* name : {"gamma-type", "symmetric-stable", "atomic-comb", "log-doa"}) {
    CHECK(list.out.find(name) != std::string::npos);
  }
  const auto d = call({"measure", "describe", "--measure", "symmetric-stable"});
  REQUIRE(d.code == 0);
  const auto j = nlohmann::json::parse(d.out);
  CHECK(j["name"] == "symmetric-stable");
  CHECK(j["infinite_activity"]["plus"] == true);
  CHECK(j["total_mass"]["plus"].is_null());
  const auto inline_json =
      call({"measure", "describe", "--measure", R"({"name": "gamma-type"})"});
  CHECK(inline_json.code == 0);
}

TEST_CASE("simulate is byte-identical across runs and worker counts") {
  const auto a = scratch("sim_a");
  const auto b = scratch("sim_b");
  const std::vector<std::string> base{"simulate", "--measure", "gaussian-plus-gamma", "--t", "0.001",
                                      "--n", "10", "--seed", "1", "--dump-paths"};
  auto args_a = base;
  args_a.insert(args_a.end(), {"--threads", "1", "--out", a.string()});
  auto args_b = base;
  args_b.insert(args_b.end(), {"--threads", "3", "--out", b.string()});
  REQUIRE(call(args_a).code == 0);
  const std::string first = slurp(a / "simulate.csv");
  REQUIRE(call(args_a).code == 0);
  CHECK(slurp(a / "simulate.csv") == first);
  REQUIRE(call(args_b).code == 0);
  CHECK(slurp(b / "simulate.csv") == first);
  CHECK(slurp(b / "paths.csv") == slurp(a / "paths.csv"));
  CHECK(first.rfind("sample,untrimmed,trimmed,qv,qv_trimmed,resolved_jumps\r\n", 0) == 0);
  // Header plus ten rows.
  CHECK(std::count(first.begin(), first.end(), '\n') == 11);
  CHECK(slurp(a / "paths.csv").rfind("sample,time,size\r\n", 0) == 0);
}

TEST_CASE("LEVYTRIM_SEED is the seed fallback") {
  const auto a = scratch("seed_a");
  const auto b = scratch("seed_b");
  const std::vector<std::string> base{"simulate", "--measure", "gamma-type", "--t", "0.1", "--n", "20"};
  auto with_seed = base;
  with_seed.insert(with_seed.end(), {"--seed", "42", "--out", a.string()});
  REQUIRE(call(with_seed).code == 0);
  auto from_env = base;
  from_env.insert(from_env.end(), {"--out", b.string()});
  setenv("LEVYTRIM_SEED", "42", 1);
  REQUIRE(call(from_env).code == 0);
  CHECK(slurp(a / "simulate.csv") == slurp(b / "simulate.csv"));
  setenv("LEVYTRIM_SEED", "forty-two", 1);
  CHECK(call(from_env).code == 2);
  // An explicit flag wins over the environment.
  CHECK(call(with_seed).code == 0);
  unsetenv("LEVYTRIM_SEED");
}

TEST_CASE("doa classifies log-doa as normal") {
  const auto dir = scratch("doa");
  const auto r = call({"doa", "--measure", "log-doa", "--x-decades", "9", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("normal-DOA-evidence") != std::string::npos);
  const std::string csv = slurp(dir / "doa.csv");
  CHECK(csv.rfind("x,ratio,x_tail,nu,rs_ratio\r\n", 0) == 0);
  // 9 decades at 8 points each, both ends included.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 73);
  const auto ws = call({"doa", "--measure", "gamma-subordinator", "--out", dir.string()});
  CHECK(ws.out.find("weak-derivative") != std::string::npos);
}

TEST_CASE("norming writes constants and limits") {
  const auto dir = scratch("norming");
  const auto r = call({"norming", "--measure", "gaussian", "--t-grid", "0.01,0.0001", "--out",
                       dir.string()});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(dir / "norming.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "t,b_t,a_t,construction\r");
  for (double t : {0.01, 1e-4}) {
    REQUIRE(std::getline(lines, line));
    double tv = 0, b = 0, a = 0;
    char c1 = 0, c2 = 0, c3 = 0;
    std::istringstream row(line);
    row >> tv >> c1 >> b >> c2 >> a >> c3;
    CHECK(tv == t);
    // Gaussian: t/b^2 = 1.
    CHECK(b == doctest::Approx(std::sqrt(t)).epsilon(1e-12));
    CHECK(a == 0.0);
    CHECK(line.find(",normal") != std::string::npos);
  }
  CHECK(slurp(dir / "kallenberg.csv").rfind("t,x,tail_plus,tail_minus,v_limit,centering\r\n", 0) == 0);
}

TEST_CASE("verify rep writes a report and passes") {
  const auto dir = scratch("rep");
  const auto r = call({"verify", "rep", "--measure", "gamma-type", "--t", "0.1", "--r", "1",
                       "--modulus", "--n", "2000", "--seed", "7", "--threads", "2", "--out",
                       dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("PASS representation", 0) == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "verify-rep.json"));
  REQUIRE(j.size() == 1);
  CHECK(j[0]["check_name"] == "representation");
  CHECK(j[0]["seed"] == 7);
  CHECK(j[0]["pass"] == true);
  CHECK(fs::exists(dir / "verify-rep-quantiles.csv"));
}

TEST_CASE("failing checks exit with 1") {
  const auto dir = scratch("fail");
  // A charfn tolerance no finite sample can meet.
  const auto r = call({"verify", "charfn", "--measure", "gamma-type", "--t", "0.1", "--r", "1",
                       "--n", "200", "--theta-points", "5", "--tol", "1e-9", "--out", dir.string()});
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL charfn") != std::string::npos);
  CHECK(r.out.find("PASS charfn-invariants") != std::string::npos);
}

TEST_CASE("verify qv and jumps") {
  const auto dir = scratch("qv");
  const auto qv = call({"verify", "qv", "--measure", "gaussian", "--t-grid", "0.1,0.01", "--r", "0",
                        "--n", "200", "--out", dir.string()});
  CHECK(qv.code == 0);
  CHECK(fs::exists(dir / "verify-qv.json"));
  const auto jumps = call({"verify", "jumps", "--measure", "symmetric-stable", "--t", "0.1", "--r",
                           "1", "--side", "minus", "--n", "2000", "--out", dir.string()});
  CHECK(jumps.code == 0);
  CHECK(call({"verify", "jumps", "--measure", "symmetric-stable", "--side", "up", "--n", "200",
              "--out", dir.string()})
            .code == 2);
}
