#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "permstat/cli.hpp"

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run call(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = permstat::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string temp_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / ("permstat_cli_" + name);
  std::ofstream(p, std::ios::binary) << body;
  return p.string();
}

const nlohmann::json* find_check(const nlohmann::json& j, const std::string& name) {
  for (const auto& c : j["checks"]) {
    if (c["name"] == name) return &c;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("moments for the footrule at N = 6") {
  const Run r = call({"moments", "--matrix", "footrule", "--N", "6"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["command"] == "moments");
  const auto* mean = find_check(j, "mean");
  REQUIRE(mean);
  CHECK((*mean)["analytic"].get<double>() == doctest::Approx(35.0 / 3.0).epsilon(1e-14));
  CHECK((*mean)["verdict"] == "PASS");
  // Diaconis-Graham: Var D_N = (N+1)(2N^2+7)/45.
  const auto* var = find_check(j, "variance");
  REQUIRE(var);
  CHECK((*var)["analytic"].get<double>() == doctest::Approx(7.0 * 79.0 / 45.0).epsilon(1e-13));
  CHECK((*var)["empirical"].get<double>() == doctest::Approx(7.0 * 79.0 / 45.0).epsilon(1e-12));
  CHECK(j["summary"]["failed"] == 0);
}

TEST_CASE("exact permutation test on {1,2} vs {3,4}") {
  const auto a = temp_file("a.csv", "1\n2\n");
  const auto b = temp_file("b.csv", "3\r\n4\r\n");
  const Run r = call({"perm-test", "--x", a, "--y", b, "--stat", "mean_diff", "--mode", "exact"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["checks"][0]["empirical"]["p_value"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(j["config"]["x"] == "permstat_cli_a.csv");
}

TEST_CASE("exit code 2 on usage and data errors") {
  Run r = call({"tail-check", "--matrix", "footrule", "--N", "10"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--seed") != std::string::npos);
  CHECK(r.out.empty());

  CHECK(call({}).code == 2);
  CHECK(call({"no-such-command"}).code == 2);
  CHECK(call({"moments", "--matrix", "nope"}).code == 2);
  CHECK(call({"moments", "--format", "xml"}).code == 2);
  CHECK(call({"tail-check", "--matrix", "footrule", "--N", "10", "--bound", "v2", "--seed", "1"}).code == 2);

  const auto bad = temp_file("bad.csv", "1,2\n3\n");
  r = call({"moments", "--matrix-csv", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find(":2: expected 2 fields") != std::string::npos);

  const auto a = temp_file("a.csv", "1\n2\n");
  r = call({"perm-test", "--x", a, "--y", a, "--stat", "median"});
  CHECK(r.code == 2);
  CHECK(r.err.find("mean_diff") != std::string::npos);
}

TEST_CASE("help and version exit 0") {
  CHECK(call({"--help"}).code == 0);
  CHECK(call({"moments", "--help"}).code == 0);
  const Run v = call({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out == "0.1.0\n");
}

TEST_CASE("a failing verdict gives exit code 1") {
  // Sample sizes too close for a 3 SE decrease.
  const Run r = call({"series-reg", "--n", "20,21", "--seed", "11", "--reps", "200"});
  CHECK(r.code == 1);
  CHECK(nlohmann::json::parse(r.out)["summary"]["failed"].get<int>() >= 1);
}

TEST_CASE("--output writes the report, --format text renders the same records") {
  const auto path = (std::filesystem::temp_directory_path() / "permstat_cli_report.json").string();
  std::filesystem::remove(path);
  const Run r = call({"moments", "--N", "4", "--output", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == call({"moments", "--N", "4"}).out);

  const Run t = call({"moments", "--N", "4", "--format", "text"});
  CHECK(t.out.find("PASS mean") != std::string::npos);
  CHECK(t.out.find("moments: 5 passed, 0 failed") != std::string::npos);
}

TEST_CASE("thread count does not change output; env var is the fallback") {
  const std::vector<std::string> base{"rosen", "--N", "50", "--seed", "3", "--reps", "5000"};
  auto with = [&](const std::string& threads) {
    auto args = base;
    args.insert(args.end(), {"--threads", threads});
    return call(args).out;
  };
  const std::string one = with("1");
  CHECK(one == with("3"));
  CHECK(one == with("0"));

  setenv("PERMSTAT_THREADS", "2", 1);
  CHECK(call(base).out == one);
  setenv("PERMSTAT_THREADS", "two", 1);
  CHECK(call(base).code == 2);
  unsetenv("PERMSTAT_THREADS");
}

TEST_CASE("seeds drive every stochastic command") {
  const Run a = call({"clt-check", "--N", "8", "--seed", "1", "--reps", "2000"});
  const Run b = call({"clt-check", "--N", "8", "--seed", "2", "--reps", "2000"});
  CHECK(a.code == 0);
  CHECK(a.out != b.out);
  CHECK(a.out == call({"clt-check", "--N", "8", "--seed", "1", "--reps", "2000"}).out);
}

TEST_CASE("verify-all is byte-identical across runs") {
  const std::vector<std::string> args{"verify-all", "--seed", "7", "--reps", "20000"};
  const Run a = call(args);
  const Run b = call(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(nlohmann::json::parse(a.out)["summary"]["passed"] == 11);
}
