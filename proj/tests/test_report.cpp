#include "doctest.h"

#include "mutate.hpp"
#include "spec_gen.hpp"

#include "quasitame/error.hpp"
#include "quasitame/report.hpp"

using namespace quasitame;
using quasitame::testing::SpecGen;

namespace {

bool same_payload(const Report &a, const Report &b) {
  return a.payload.index() == b.payload.index() &&
         std::visit(
             [&](const auto &x) {
               using T = std::decay_t<decltype(x)>;
               return x == std::get<T>(b.payload);
             },
             a.payload);
}

const char *kZN = "tail:\n  level:\n    0 0\n  accumulate:\n    1 0\n  descent:\n    0 0\n";

} // namespace

TEST_CASE("json round trip") {
  for (const std::string text : std::vector<std::string>
       {"prod n: C(3^inf)^2", "prod n: C(2^inf)^omega", "prod n: Z", "prod n: C(2)^omega",
        "prod n: [Z] tower(2, 1); C(p(n+1)^2)", "C(12)", "Z^omega", std::string(kZN)}) {
    CAPTURE(text);
    const auto e = parse(text);
    Report r = analyze(e);
    r.timing_ms = 1.5;
    const Report back = report_from_json(to_json(r));
    CHECK(back.format == r.format);
    CHECK(back.input == r.input);
    CHECK(back.tame == r.tame);
    CHECK(back.relative_basis == r.relative_basis);
    CHECK(back.compact == r.compact);
    CHECK(back.trace == r.trace);
    CHECK(back.timing_ms == 1.5);
    CHECK(same_payload(back, r));
    CHECK(to_json(back) == to_json(r));
    CHECK(check_report(e, back).empty());
  }
}

TEST_CASE("json is deterministic with sorted keys") {
  const auto e = parse("prod n: [Q] C(2^(n+1)) + C(3^inf); Z");
  const std::string a = to_json(analyze(e)), b = to_json(analyze(e));
  CHECK(a == b);
  CHECK(a.find("\"certificate\"") == std::string::npos);
  const auto j = nlohmann::json::parse(a);
  std::vector<std::string> keys;
  for (const auto &[k, v] : j.items()) keys.push_back(k);
  CHECK(std::is_sorted(keys.begin(), keys.end()));
}

TEST_CASE("discrete inputs") {
  const Report r = analyze(parse("Z^omega + C(2^inf)^omega"));
  CHECK(r.tame);
  CHECK(r.format == InputFormat::Discrete);
  CHECK(r.trace.front().id == "discrete");
}

TEST_CASE("schema errors") {
  const std::string good = to_json(analyze(parse("prod n: Z")));
  auto j = nlohmann::json::parse(good);
  CHECK_NOTHROW(report_from_json(good));
  auto expect_schema = [](const nlohmann::json &x) {
    try {
      report_from_json(x.dump());
      return false;
    } catch (const Error &e) {
      return e.kind() == ErrorKind::Schema;
    }
  };
  auto m = j;
  m.erase("trace");
  CHECK(expect_schema(m));
  m = j;
  m["extra"] = 1;
  CHECK(expect_schema(m));
  m = j;
  m["schema_version"] = 2;
  CHECK(expect_schema(m));
  m = j;
  m["certificate"] = nlohmann::json::object();
  CHECK(expect_schema(m));
  m = j;
  m["witness"]["atoms"][0] = "Z + Q";
  CHECK(expect_schema(m));
  m = j;
  m["witness"]["indices"]["start"] = -1;
  CHECK(expect_schema(m));
  m = j;
  m["trace"] = nlohmann::json::array();
  CHECK(expect_schema(m));
  CHECK_THROWS_AS(report_from_json("{"), Error);
}

TEST_CASE("check_report rejects reports of other inputs") {
  const auto a = parse("prod n: C(3^inf)^2");
  const auto b = parse("prod n: C(5^inf)^2");
  CHECK_FALSE(check_report(a, analyze(b)).empty());
  CHECK_FALSE(check_report(parse(kZN), analyze(parse("prod n: Z"))).empty());
  Report r = analyze(a);
  r.tame = false;
  CHECK_FALSE(check_report(a, r).empty());
}

TEST_CASE("property: reports re-validate and payload mutations are rejected") {
  SpecGen gen(11);
  std::mt19937_64 rng(12);
  int tame = 0, mutated = 0;
  for (int i = 0; i < 150; ++i) {
    const std::string text = gen.spec();
    CAPTURE(text);
    const auto e = parse(text);
    const Report r = analyze(e);
    tame += r.tame;
    const std::string js = to_json(r);
    REQUIRE(check_report(e, report_from_json(js)).empty());
    for (int k = 0; k < 3; ++k) {
      auto j = nlohmann::json::parse(js);
      const std::string where = quasitame::testing::mutate_payload(j, rng);
      CAPTURE(where);
      bool rejected = false;
      try {
        rejected = !check_report(e, report_from_json(j.dump())).empty();
      } catch (const Error &) {
        rejected = true;
      }
      CHECK(rejected);
      ++mutated;
    }
  }
  CHECK(tame > 20);
  CHECK(tame < 130);
  CHECK(mutated == 450);
}
