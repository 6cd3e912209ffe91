#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(JNR_CLI_PATH) + " " + args + " 2>/dev/null";
  CliResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) res.output.append(buf, got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("jnr_cli_" + std::to_string(getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("demo output feeds every other command") {
  TempDir dir;
  const auto demo = run_cli("demo ex3.2 --out " + dir.file("ex32.json"));
  REQUIRE(demo.exit_code == 0);

  SUBCASE("support at four axis directions reports unit support") {
    const auto res = run_cli("support " + dir.file("ex32.json") + " --dirs 4");
    REQUIRE(res.exit_code == 0);
    const Json doc = Json::parse(res.output);
    REQUIRE(doc["records"].size() == 4);
    for (const auto& rec : doc["records"])
      CHECK(std::abs(rec["h"].get<double>() - 1.0) <= 1e-12);
  }

  SUBCASE("boundary emits the square hull") {
    const auto res = run_cli("boundary " + dir.file("ex32.json") + " --dirs 360 --format json");
    REQUIRE(res.exit_code == 0);
    const Json doc = Json::parse(res.output);
    REQUIRE(doc["hull_vertices"].size() == 4);
    for (const auto& v : doc["hull_vertices"]) {
      CHECK(std::abs(std::abs(v[0].get<double>()) - 1.0) <= 1e-6);
      CHECK(std::abs(std::abs(v[1].get<double>()) - 1.0) <= 1e-6);
    }
  }

  SUBCASE("decide commute rejects the family with exit 0") {
    const auto res = run_cli("decide " + dir.file("ex32.json") + " --mode commute");
    CHECK(res.exit_code == 0);
    const Json doc = Json::parse(res.output);
    CHECK(doc["verdict"] == "NotCommutingNormal");
    CHECK(doc["k_used"] == 3);
    CHECK(doc["params"]["mode"] == "commute");
  }
}

TEST_CASE("parse errors name the offending row") {
  TempDir dir;
  {
    std::ofstream out(dir.file("bad.json"));
    out << R"({"n": 2, "matrices": [{"name": "B", "re": [[1, 0], [1, 2, 3]]}]})";
  }
  const auto res = run_cli("support " + dir.file("bad.json"));
  CHECK(res.exit_code == 1);
}

TEST_CASE("unknown demo exits with an error") {
  CHECK(run_cli("demo wat").exit_code == 1);
}

TEST_CASE("stdin input works") {
  TempDir dir;
  run_cli("demo ex3.1 --out " + dir.file("p.json"));
  const std::string args = "boundary - --dirs 90 < " + dir.file("p.json");
  const auto res = run_cli(args);
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("# hull_vertices") != std::string::npos);
}

TEST_CASE("pinch reports weights and residual") {
  TempDir dir;
  {
    std::ofstream out(dir.file("proj.json"));
    out << R"({"n": 4, "matrices": [{"name": "P",
      "re": [[0.5, 0, 0.5, 0], [0, 0.5, 0, 0.5], [0.5, 0, 0.5, 0], [0, 0.5, 0, 0.5]]}]})";
  }
  const auto res = run_cli("pinch " + dir.file("proj.json") + " --split 2,2");
  REQUIRE(res.exit_code == 0);
  const Json doc = Json::parse(res.output);
  REQUIRE(doc["weights"].size() == 3);
  CHECK(doc["weights"][0].get<double>() == 0.5);
  CHECK(doc["weights"][1].get<double>() == 0.0);
  CHECK(doc["weights"][2].get<double>() == 0.5);
  CHECK(doc["reconstruction_residual"].get<double>() <= 1e-12);
  CHECK(doc["rank"] == 2);
}
