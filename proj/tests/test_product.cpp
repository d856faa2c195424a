#include "doctest.h"

#include "quasitame/dsl.hpp"
#include "quasitame/error.hpp"
#include "quasitame/primes.hpp"
#include "quasitame/product.hpp"

using namespace quasitame;

namespace {

SequenceSpec P(const std::string &s) { return parse_product(s); }
GroupDescriptor D(const std::string &s) { return parse_descriptor(s); }

bool cites(const Verdict &v, const std::string &theorem, const std::string &id = "") {
  for (const auto &t : v.trace)
    if (t.theorem == theorem && (id.empty() || t.id.find(id) != std::string::npos)) return true;
  return false;
}

} // namespace

TEST_CASE("seq_nth") {
  CHECK(seq_nth(P("prod n: [Z] C(3)"), 0) == D("Z"));
  CHECK(seq_nth(P("prod n: [Z] C(3)"), 5) == D("C(3)"));
  // Third prime by independent enumeration: 2, 3, 5.
  CHECK(primes::nth_prime(3) == 5);
  CHECK(seq_nth(P("prod n: C(p(n+1)^inf)^omega"), 2) == D("C(5^inf)^omega"));
  CHECK(seq_nth(P("prod n: C(2^(n+1))"), 4) == D("C(32)"));
  auto s = P("prod n: [0, 0] C(2); C(3^(2*n+1)); tower(p(n+1), n+1)");
  CHECK(seq_nth(s, 3) == D("C(3^7)"));
  CHECK(seq_nth(s, 4) == D("tower(11, 5)"));
}

TEST_CASE("eventually") {
  auto e = eventually(P("prod n: [Z] C(3)"), {PredKind::Torsion});
  CHECK(e.holds);
  CHECK(*e.threshold == 1);
  CHECK_FALSE(eventually(P("prod n: Z"), {PredKind::Torsion}).holds);
  e = eventually(P("prod n: C(p(n+1)^inf)^omega"), {PredKind::PSylowGood, 2});
  CHECK(e.holds);
  CHECK(*e.threshold == 1);
  e = eventually(P("prod n: C(p(n+1)^inf)^omega"), {PredKind::PSylowGood, 7});
  CHECK(*e.threshold == 4);
  CHECK_FALSE(eventually(P("prod n: C(2)^omega"), {PredKind::Finite}).holds);
  CHECK(eventually(P("prod n: C(2^(n+1))"), {PredKind::Bounded}).holds);
  CHECK_FALSE(eventually(P("prod n: tower(2, 1)"), {PredKind::Bounded}).holds);
  e = eventually(P("prod n: [C(3)] C(2); C(p(2*n+1))"), {PredKind::PPartTrivial, 3});
  // p(2n+1) = 3 needs n = 1/2: never; only the prefix entry has a 3-part.
  CHECK(*e.threshold == 1);
  e = eventually(P("prod n: [C(3)] C(p(n+1)); C(2)"), {PredKind::PPartTrivial, 3});
  CHECK(*e.threshold == 2); // p(2) = 3 at n = 1
  CHECK(eventually(P("prod n: [Z] C(2); Q"), {PredKind::NonTorsionInfinitelyOften}).holds);
}

TEST_CASE("solecki_check examples") {
  auto v = solecki_check(P("prod n: C(3^inf)^2"));
  CHECK(v.tame);
  CHECK(v.relatively_tame);
  CHECK(cites(v, "th:Sol2"));
  v = solecki_check(P("prod n: C(2^inf)^omega"));
  CHECK_FALSE(v.tame);
  CHECK_FALSE(v.relatively_tame);
  CHECK(std::get<Witness>(v.payload).entries[0].kind == SylowKind::DivisibleSummand);
  v = solecki_check(P("prod n: Z"));
  CHECK_FALSE(v.tame);
  CHECK(std::get<Witness>(v.payload).kind == WitnessKind::ZN);
  v = solecki_check(P("prod n: C(2^(n+1))"));
  REQUIRE(v.tame);
  const auto &c = std::get<TameCertificate>(v.payload);
  REQUIRE(c.primes.size() == 1);
  CHECK(c.primes[0].F[0].str() == "C(2^(n+1))");
  CHECK(c.primes[0].k[0] == 0);
  CHECK(solecki_check(P("prod n: 0")).tame);
}

TEST_CASE("decompose") {
  auto d = decompose(P("prod n: Z + Q"));
  CHECK(d.R.tail[0].str() == "Z");
  CHECK(d.D.tail[0].str() == "Q");
  d = decompose(P("prod n: C(4) + C(3^inf)"));
  CHECK(d.R.tail[0].str() == "C(4)");
  CHECK(d.D.tail[0].str() == "C(3^inf)");
  d = decompose(P("prod n: C(2)^omega"));
  CHECK(d.R == P("prod n: C(2)^omega"));
  CHECK(d.D.tail[0].str() == "0");
  d = decompose(P("prod n: [Q + C(5)] C(p(n+1)^inf) + C(2^(n+1))"));
  CHECK(d.R.prefix[0] == D("C(5)"));
  CHECK(d.D.tail[0].str() == "C(p(n+1)^inf)");
}

TEST_CASE("reduced_classify") {
  auto v = reduced_classify(P("prod n: C(2)^omega"));
  CHECK_FALSE(v.tame);
  CHECK(cites(v, "th:Main:Red", "clause-2"));
  CHECK(cites(v, "thProC"));
  const auto &w = std::get<Witness>(v.payload);
  CHECK(w.entries[0].kind == SylowKind::BoundedDsc);
  CHECK(w.entries[0].group.str() == "C(2)^omega");
  v = reduced_classify(P("prod n: Z"));
  CHECK(cites(v, "th:Main:Red", "clause-1"));
  v = reduced_classify(P("prod n: C(2^(n+1))"));
  CHECK(v.tame);
  CHECK(cites(v, "th:Main:Red", "clause-3"));
  CHECK(solecki_check(P("prod n: C(2^(n+1))")).tame);
  try {
    reduced_classify(P("prod n: Q"));
    FAIL("expected NotReduced");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::NotReduced);
  }
}

TEST_CASE("witness_extract") {
  auto w = witness_extract(P("prod n: Z + C(2)"), 1);
  CHECK(w.indices.positions == std::vector<std::uint64_t>{0});
  CHECK(w.atoms[0] == Atom::free_int());
  w = witness_extract(P("prod n: C(2)^omega"), 2, 2);
  CHECK(w.entries[0].kind == SylowKind::BoundedDsc);
  w = witness_extract(P("prod n: tower(2, 1)"), 2, 2);
  CHECK(w.entries[0].kind == SylowKind::DivisibleQuotient);
  CHECK(w.entries[0].group.str() == "tower(2, 1)");
  CHECK(w.entries[0].pieces.is_omega());
  CHECK_THROWS_AS(witness_extract(P("prod n: C(2)"), 2, 2), Error);
  CHECK_THROWS_AS(witness_extract(P("prod n: C(2)"), 1), Error);
}

TEST_CASE("classify examples") {
  auto v = classify(P("prod n: C(3^inf)^2"));
  CHECK(v.tame);
  CHECK(cites(v, "le:Decom"));
  CHECK(cites(v, "th:Sol2"));
  v = classify(P("prod n: C(2)^omega + Q"));
  CHECK_FALSE(v.tame);
  CHECK(std::get<Witness>(v.payload).part == Part::R);
  v = classify(P("prod n: C(p(n+1)^inf)^omega"));
  CHECK(v.tame);
  auto c = std::get<TameCertificate>(v.payload);
  CHECK(c.families == std::vector<FamilyTag>{{0, 1, 1}});
  CHECK(c.primes.empty());
  v = classify(P("prod n: C(2^inf)^omega"));
  CHECK_FALSE(v.tame);
  CHECK_FALSE(v.relatively_tame);
  CHECK(std::get<Witness>(v.payload).part == Part::D);
  CHECK(cites(v, "th:Sol2"));
}

TEST_CASE("checkers accept canonical payloads and reject edits") {
  for (const char *text :
       {"prod n: C(3^inf)^2", "prod n: [Z, Q] C(2^(n+1)) + C(3^inf); C(p(n+1))^omega",
        "prod n: Z", "prod n: [C(2)] Q; C(3)", "prod n: C(2)^omega + tower(3, 1)",
        "prod n: C(3)^omega; tower(3, n+1)", "prod n: [C(5)] C(2^inf)^omega + C(2)",
        "prod n: C(p(2*n+1)^inf)^omega + C(2)^3; C(p(n+1)^2)"}) {
    CAPTURE(text);
    const auto s = P(text);
    const auto v = classify(s);
    if (const auto *c = std::get_if<TameCertificate>(&v.payload)) {
      CHECK(check_certificate(s, *c).empty());
      TameCertificate m = *c;
      m.torsion_threshold += 1;
      CHECK_FALSE(check_certificate(s, m).empty());
      if (!m.primes.empty()) {
        m = *c;
        m.primes[0].threshold += 1;
        CHECK_FALSE(check_certificate(s, m).empty());
        m = *c;
        m.primes[0].k[0] += 1;
        CHECK_FALSE(check_certificate(s, m).empty());
      }
      if (!m.families.empty()) {
        m = *c;
        m.families[0].b += 1;
        CHECK_FALSE(check_certificate(s, m).empty());
      }
    } else {
      const auto &w = std::get<Witness>(v.payload);
      CHECK(check_witness(s, w).empty());
      Witness m = w;
      m.indices.start += 1;
      CHECK_FALSE(check_witness(s, m).empty());
      m = w;
      m.indices.positions[0] += 1;
      CHECK_FALSE(check_witness(s, m).empty());
      if (w.kind == WitnessKind::SylowProduct) {
        m = w;
        m.p += 1;
        CHECK_FALSE(check_witness(s, m).empty());
      }
    }
  }
}
