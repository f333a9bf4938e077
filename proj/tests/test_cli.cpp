#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

std::string tmp_path(const std::string& name) { return std::string(SSCX_TEST_TMP) + "/" + name; }

int run(const std::string& args) {
  const std::string cmd = std::string(SSCX_CLI) + " " + args + " > " + tmp_path("cli_stdout.txt") + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("verify on the odometer passes and is byte-identical across runs") {
  REQUIRE(run("verify --builtin odometer --seed 7 --json " + tmp_path("v1.json")) == 0);
  REQUIRE(run("verify --builtin odometer --seed 7 --json " + tmp_path("v2.json")) == 0);
  const auto a = slurp(tmp_path("v1.json")), b = slurp(tmp_path("v2.json"));
  CHECK_FALSE(a.empty());
  CHECK(a == b);
  auto j = nlohmann::json::parse(a);
  CHECK(j["verify"]["all_pass"] == true);
  CHECK(j["seed"] == 7);
  for (const char* key : {"version", "group", "hsigma", "epsilon", "budgets"}) CHECK(j.contains(key));
  CHECK(j["group"]["hash"].get<std::string>().size() == 16);
  CHECK(a.find("time") == std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run("nucleus -g " SSCX_TEST_DATA "/aleshin.json") == 3);
  CHECK(run("nucleus") == 2);
  CHECK(run("nucleus --builtin nope") == 2);
  CHECK(run("nucleus --builtin odometer --group x.json") == 2);
  CHECK(run("graph --builtin odometer --levels 4..2") == 2);
  CHECK(run("graph --builtin odometer --levels abc") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("nucleus -g /nonexistent/file.json") == 2);
  CHECK(run("graph --builtin basilica --levels 30..30") == 3);
  CHECK(run("nucleus --builtin odometer --json " + tmp_path("n.json")) == 0);
}

TEST_CASE("boundary degree on the odometer emits classes summing to two") {
  REQUIRE(run("boundary degree --builtin odometer --ray \"1;0\" --json " + tmp_path("deg.json")) == 0);
  auto j = nlohmann::json::parse(slurp(tmp_path("deg.json")));
  REQUIRE(j["rays"].size() == 1);
  CHECK(j["rays"][0]["ray"] == "1;0");
  CHECK(j["rays"][0]["degree_sum"] == 2);
  int sum = 0;
  for (const auto& c : j["rays"][0]["classes"]) sum += c["degree"]["value"].get<int>();
  CHECK(sum == 2);
}

TEST_CASE("reports embed the run configuration") {
  REQUIRE(run("cone-types --builtin grigorchuk --hsigma 3 --epsilon 0.05 --levels 1..4 --seed 3 --json " +
              tmp_path("ct.json")) == 0);
  auto j = nlohmann::json::parse(slurp(tmp_path("ct.json")));
  CHECK(j["hsigma"] == 3);
  CHECK(j["epsilon"].get<double>() == doctest::Approx(0.05));
  CHECK(j["seed"] == 3);
  CHECK(j["budgets"]["levels"][0] == 1);
  CHECK(j["budgets"]["levels"][1] == 4);
  CHECK(j["calibration"]["hsigma_source"] == "override");
  CHECK(j["cone_types"]["levels"].size() == 4);
}

TEST_CASE("graph writes DOT") {
  REQUIRE(run("graph --builtin basilica --levels 0..3 --dot " + tmp_path("g.dot") + " --json " + tmp_path("g.json")) == 0);
  auto dot = slurp(tmp_path("g.dot"));
  CHECK(dot.find("graph") != std::string::npos);
  auto j = nlohmann::json::parse(slurp(tmp_path("g.json")));
  CHECK(j["levels"].size() == 4);
  for (const auto& l : j["levels"]) CHECK(l["connected"] == true);
}
