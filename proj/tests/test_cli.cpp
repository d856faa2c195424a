#include "doctest.h"

#include "quasitame/cli.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace quasitame;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "quasitame");
  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string &name, const std::string &content) {
  const fs::path dir = fs::temp_directory_path() / "quasitame_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << content;
  return p.string();
}

} // namespace

TEST_CASE("classify exit codes") {
  auto r = run({"classify", temp_file("a.qcg", "prod n: C(3^inf)^2\n")});
  CHECK(r.code == 0);
  CHECK(r.out.find("verdict: tame") != std::string::npos);
  r = run({"classify", "--json", temp_file("b.qcg", "prod n: C(2^inf)^omega\n")});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"]["tame"] == false);
  CHECK(j["verdict"]["relative_basis"] == "theorem");

  r = run({"classify", temp_file("bad.qcg", "prod n: C(3^inf\n")});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find("line 2, column 1") != std::string::npos);
  r = run({"classify", "/nonexistent/file.qcg"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  r = run({"classify"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  r = run({"frobnicate"});
  CHECK(r.code == 2);
}

TEST_CASE("inconclusive horizon exits 3") {
  // Free rank is flat for two steps and then grows.
  const std::string late = "levels:\n  0 0\n  0 0\nmaps:\n  0 0\n"
                           "tail:\n  level:\n    0 0\n  accumulate:\n    1 0\n  descent:\n    0 0\n"
                           "  splice:\n    0 1\n";
  const std::string f = temp_file("late.invsys", late);
  CHECK(run({"classify", f}).code == 0);
  const auto r = run({"classify", "--horizon-override", "0", f});
  CHECK(r.code == 3);
  CHECK(r.out.empty());
}

TEST_CASE("explain adds detail") {
  const std::string f = temp_file("e.qcg", "prod n: C(2)^omega\n");
  const auto a = run({"classify", "--json", f});
  const auto b = run({"explain", "--json", f});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(nlohmann::json::parse(b.out)["trace"].size() > nlohmann::json::parse(a.out)["trace"].size());
}

TEST_CASE("check-witness") {
  const std::string in = temp_file("c.qcg", "prod n: [Z] C(2^(n+1)) + C(3^inf)^2\n");
  const std::string other = temp_file("d.qcg", "prod n: C(3^inf)^2\n");
  const auto r = run({"classify", "--json", in});
  REQUIRE(r.code == 0);
  const std::string rep = temp_file("c.json", r.out);
  CHECK(run({"check-witness", in, rep}).code == 0);
  CHECK(run({"check-witness", other, rep}).code == 1);

  auto j = nlohmann::json::parse(r.out);
  j["certificate"]["primes"][1]["k"][0] = 3;
  auto m = run({"check-witness", in, temp_file("c2.json", j.dump())});
  CHECK(m.code == 1);
  CHECK(m.out.empty());
  CHECK(run({"check-witness", in, temp_file("c3.json", "{\"schema_version\": 1}")}).code == 2);
  CHECK(run({"check-witness", in, temp_file("c4.json", "not json")}).code == 2);
}

TEST_CASE("oracle and snf") {
  auto r = run({"oracle", "--max-order", "64"});
  CHECK(r.code == 0);
  CHECK(r.out.find("mismatches: 0") != std::string::npos);
  r = run({"oracle", "--max-order", "1", "--json"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["groups"] == 1);
  r = run({"oracle", "--max-order", "5000"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());

  r = run({"snf", temp_file("m.txt", "2 2\n2 4\n6 8\n")});
  CHECK(r.code == 0);
  CHECK(r.out.find("S:\n2 2\n2 0\n0 4\n") != std::string::npos);
  r = run({"snf", "--json", temp_file("z.txt", "1 1\n0\n")});
  CHECK(nlohmann::json::parse(r.out)["S"] == nlohmann::json::parse("[[\"0\"]]"));
  r = run({"snf", temp_file("bad.txt", "2 2\n1 2 3\n")});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
}
