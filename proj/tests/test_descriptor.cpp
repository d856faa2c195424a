#include "doctest.h"

#include "quasitame/descriptor.hpp"
#include "quasitame/error.hpp"
#include "quasitame/oracle.hpp"

#include <map>
#include <numeric>
#include <random>

using namespace quasitame;

namespace {

const Mult w = Mult::omega();

GroupDescriptor C(std::uint64_t p, std::uint64_t k, Mult m = 1) {
  return GroupDescriptor::of(Atom::cyclic(p, k), m);
}
GroupDescriptor P(std::uint64_t p, Mult m = 1) {
  return GroupDescriptor::of(Atom::prufer(p), m);
}
GroupDescriptor Z(Mult m = 1) { return GroupDescriptor::of(Atom::free_int(), m); }
GroupDescriptor Q(Mult m = 1) { return GroupDescriptor::of(Atom::rationals(), m); }
GroupDescriptor operator+(const GroupDescriptor &a, const GroupDescriptor &b) {
  return direct_sum(a, b);
}

// Element-order histogram of an explicit table.
std::map<std::uint64_t, std::uint64_t> order_profile(const oracle::FiniteGroupTable &t) {
  std::map<std::uint64_t, std::uint64_t> h;
  for (auto x : t.elements()) ++h[t.element_order(x)];
  return h;
}

oracle::FiniteGroupTable full_table(std::vector<std::uint64_t> moduli) {
  std::uint64_t n = 1;
  for (auto m : moduli) n *= m;
  std::vector<std::uint32_t> all(n);
  std::iota(all.begin(), all.end(), 0u);
  return oracle::FiniteGroupTable(std::move(moduli), std::move(all));
}

} // namespace

TEST_CASE("canonicalize splits composite orders") {
  GroupDescriptor g = canonicalize({{std::int64_t{12}, 1}});
  CHECK(g == C(2, 2) + C(3, 1));
  // Z/12 and Z/4 + Z/3 have the same element-order profile.
  CHECK(order_profile(full_table({12})) == order_profile(oracle::realize(g)));
}

TEST_CASE("canonicalize edge cases") {
  CHECK(canonicalize({}).is_trivial());
  GroupDescriptor g = canonicalize({{Atom::cyclic(2, 1), 3}, {Atom::cyclic(2, 1), w}});
  CHECK(g == C(2, 1, w));
  CHECK(canonicalize({{std::int64_t{1}, 5}}).is_trivial());
  CHECK_THROWS_AS(canonicalize({{std::int64_t{0}, 1}}), Error);
  try {
    canonicalize({{std::int64_t{-3}, 1}});
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::InvalidOrder);
  }
  CHECK_THROWS_AS(Atom::cyclic(4, 1), Error);
}

TEST_CASE("direct_sum") {
  CHECK(direct_sum(Z(), GroupDescriptor{}) == Z());
  CHECK(direct_sum(C(2, 1), C(2, 1)) == C(2, 1, 2));
  CHECK(direct_sum(C(2, 2) + C(3, 1), C(2, 2, w)) == C(2, 2, w) + C(3, 1));
}

TEST_CASE("torsion, finiteness, exponent") {
  CHECK(is_torsion(C(2, 1, w)));
  CHECK_FALSE(is_finite(C(2, 1, w)));
  CHECK(*exponent(C(2, 1, w)) == 2);
  CHECK_FALSE(exponent(GroupDescriptor::tower(2, 1)).has_value());
  CHECK_FALSE(is_torsion(Q()));
  CHECK(*exponent(GroupDescriptor{}) == 1);
  CHECK(*exponent(C(2, 2) + C(3, 1) + C(2, 1)) == 12);
  CHECK_FALSE(exponent(P(3)).has_value());
}

TEST_CASE("rank") {
  const GroupDescriptor g = C(2, 1) + C(2, 2) + C(3, 1);
  CHECK(rank(g) == Mult(3));
  // log_p |{x : p x = 0}| summed over primes on Z/2 + Z/4 + Z/3.
  CHECK(oracle::brute_rank(full_table({2, 4, 3})) == 3);
  CHECK(rank(P(5, w)) == w);
  CHECK(rank(GroupDescriptor{}) == Mult(0));
  CHECK(rank(GroupDescriptor::tower(2, 3)) == w);
}

TEST_CASE("p_primary") {
  CHECK(p_primary(C(2, 2) + C(3, 1) + Z(), 2) == C(2, 2));
  CHECK(p_primary(P(3) + C(5, 1), 3) == P(3));
  CHECK(p_primary(C(2, 1, w), 3).is_trivial());
  for (std::uint64_t k = 1; k <= 6; ++k) {
    std::vector<std::uint64_t> moduli(k, 2);
    CHECK(oracle::brute_p_primary(full_table(moduli), 3).order() == 1);
  }
}

TEST_CASE("final_rank") {
  CHECK(final_rank(C(2, 1, w), 2) == Mult(0));
  // Truncations Z(2)^k: 2A is trivial.
  for (std::uint64_t k = 1; k <= 6; ++k)
    CHECK(oracle::brute_final_rank(full_table(std::vector<std::uint64_t>(k, 2)), 2) == 0);
  CHECK(final_rank(GroupDescriptor::tower(2, 1), 2) == w);
  const GroupDescriptor d = P(3, 3);
  CHECK(final_rank(d, 3) == Mult(3));
  for (std::uint64_t n = 0; n < 6; ++n) CHECK(rank_of_multiple(d, 3, n) == Mult(3));
  CHECK_THROWS_AS(final_rank(C(2, 1) + C(3, 1), 2), Error);
}

TEST_CASE("split_divisible") {
  auto s = split_divisible(Q(w) + Z());
  CHECK(s.reduced == Z());
  CHECK(s.divisible == Q(w));
  s = split_divisible(P(7) + C(7, 2));
  CHECK(s.reduced == C(7, 2));
  CHECK(s.divisible == P(7));
  const GroupDescriptor f = C(2, 3) + C(3, 1, 2);
  s = split_divisible(f);
  CHECK(s.reduced == f);
  CHECK(s.divisible.is_trivial());
  CHECK(oracle::brute_divisible_part(oracle::realize(f)).order() == 1);
}

TEST_CASE("predicates and iso_eq") {
  CHECK(is_divisible(Q()));
  CHECK_FALSE(is_reduced(Q()));
  CHECK(is_reduced(Z()));
  CHECK_FALSE(is_dsc(Z()));
  CHECK(is_dsc(GroupDescriptor::tower(3, 2)));
  CHECK(iso_eq(C(2, 1) + C(2, 2), C(2, 2) + C(2, 1)));
}

TEST_CASE("tower canonical forms") {
  const auto t1 = GroupDescriptor::tower(2, 1);
  // tower(2,1) + C(2) is the function 2,1,1,1,...
  const auto g = t1 + C(2, 1);
  CHECK(g.mult(Atom::cyclic(2, 1)) == Mult(2));
  CHECK(g.mult(Atom::cyclic(2, 5)) == Mult(1));
  CHECK(g.towers().at(2).start == 2);
  // C(2) + tower(2,2) is tower(2,1).
  CHECK(C(2, 1) + GroupDescriptor::tower(2, 2) == t1);
  // Odd and even steps recombine into the full tower.
  CHECK(GroupDescriptor::tower(2, 1, 2) + GroupDescriptor::tower(2, 2, 2) == t1);
  // Adding inside the tower range materializes exactly one exponent.
  const auto h = t1 + C(2, 5);
  CHECK(h.mult(Atom::cyclic(2, 5)) == Mult(2));
  CHECK(h.mult(Atom::cyclic(2, 6)) == Mult(1));
  CHECK(h.mult(Atom::cyclic(2, 4)) == Mult(1));
  CHECK(h.str() == "C(2) + C(4) + C(8) + C(16) + C(32)^2 + tower(2, 6)");
  CHECK(GroupDescriptor::tower(3, 1, 1, w).str() == "tower(3, 1)^omega");
  CHECK(GroupDescriptor::tower(5, 2, 3).str() == "tower(5, 2, 3)");
}

TEST_CASE("p_multiple shifts exponents") {
  const auto g = C(2, 1, 3) + C(2, 3) + GroupDescriptor::tower(2, 5, 2) + P(2);
  const auto h = p_multiple(g, 2, 2);
  CHECK(h == C(2, 1) + GroupDescriptor::tower(2, 3, 2) + P(2));
  CHECK(rank_of_multiple(g, 2, 2) == w);
}

TEST_CASE("prufer_quotient_witness") {
  const auto t = GroupDescriptor::tower(2, 1);
  auto q = prufer_quotient_witness(t, 2, w);
  CHECK(check_quotient_witness(q, t));
  // Class j collects support indices i = 2^j - 1 (mod 2^(j+1)).
  CHECK(q.class_exponents(0, 3) == std::vector<std::uint64_t>{1, 3, 5});
  CHECK(q.class_exponents(1, 3) == std::vector<std::uint64_t>{2, 6, 10});
  CHECK(q.class_exponents(2, 2) == std::vector<std::uint64_t>{4, 12});
  CHECK_THROWS_AS(prufer_quotient_witness(C(2, 1, w), 2, w), Error);

  const auto t3 = GroupDescriptor::tower(3, 1, 1, w);
  auto q2 = prufer_quotient_witness(t3, 3, 2);
  CHECK(check_quotient_witness(q2, t3));
  // Exponent suprema of both classes grow without bound.
  for (std::uint64_t j = 0; j < 2; ++j) {
    auto ex = q2.class_exponents(j, 50);
    CHECK(ex.back() >= 99);
  }
  CHECK_FALSE(check_quotient_witness(q2, GroupDescriptor::tower(3, 2, 1, w)));
}

namespace {

GroupDescriptor random_descriptor(std::mt19937_64 &rng, bool p_group_only, std::uint64_t p) {
  const std::uint64_t ps[] = {2, 3, 5};
  GroupDescriptor g;
  const int terms = static_cast<int>(rng() % 4);
  auto mult = [&]() -> Mult { return rng() % 4 == 0 ? w : Mult(1 + rng() % 3); };
  for (int i = 0; i < terms; ++i) {
    const std::uint64_t q = p_group_only ? p : ps[rng() % 3];
    switch (rng() % (p_group_only ? 3 : 5)) {
    case 0: g.add(Atom::cyclic(q, 1 + rng() % 4), mult()); break;
    case 1: g.add(Atom::cyclic(q, 1 + rng() % 4), mult()); break;
    case 2: g.add(GroupDescriptor::tower(q, 1 + rng() % 4, 1 + rng() % 3, mult())); break;
    case 3: g.add(Atom::free_int(), mult()); break;
    default: g.add(Atom::rationals(), mult()); break;
    }
  }
  return g;
}

} // namespace

TEST_CASE("property: direct_sum algebra and rank additivity") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 400; ++i) {
    auto a = random_descriptor(rng, false, 2);
    auto b = random_descriptor(rng, false, 2);
    auto c = random_descriptor(rng, false, 2);
    CHECK(iso_eq(direct_sum(a, b), direct_sum(b, a)));
    CHECK(iso_eq(direct_sum(direct_sum(a, b), c), direct_sum(a, direct_sum(b, c))));
    CHECK(rank(direct_sum(a, b)) == rank(a) + rank(b));
    auto s = split_divisible(a);
    CHECK(iso_eq(direct_sum(s.reduced, s.divisible), a));
    CHECK(is_reduced(s.reduced));
    CHECK(is_divisible(s.divisible));
    for (std::uint64_t p : {2, 3, 5})
      CHECK(p_primary(direct_sum(a, b), p) == direct_sum(p_primary(a, p), p_primary(b, p)));
  }
}

TEST_CASE("property: final rank dichotomy and shift invariance") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 400; ++i) {
    const std::uint64_t p = (i % 2) ? 2 : 3;
    auto g = random_descriptor(rng, true, p);
    const auto fr = final_rank(g, p);
    CHECK(fr <= rank(g));
    for (std::uint64_t n = 0; n < 5; ++n) CHECK(final_rank(p_multiple(g, p, n), p) == fr);
    // Reduced p-groups: final rank is 0 exactly when bounded, ω otherwise.
    CHECK((fr == Mult(0) || fr == w));
    CHECK((fr == Mult(0)) == exponent(g).has_value());
  }
}
