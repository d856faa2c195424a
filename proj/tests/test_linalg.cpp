#include "doctest.h"

#include "quasitame/error.hpp"
#include "quasitame/linalg.hpp"

#include <numeric>
#include <random>

using namespace quasitame;

namespace {

bool is_diagonal_chain(const IntMatrix &s) {
  BigInt prev = 1;
  bool seen_zero = false;
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j) {
      if (i != j) {
        if (s(i, j) != 0) return false;
        continue;
      }
      const BigInt &d = s(i, i);
      if (d < 0) return false;
      if (d == 0) {
        seen_zero = true;
        continue;
      }
      if (seen_zero || d % prev != 0) return false;
      prev = d;
    }
  return true;
}

BigInt abs_det(const IntMatrix &m) { return abs(determinant(m)); }

} // namespace

TEST_CASE("snf of the 2x2 example") {
  const IntMatrix a{{2, 4}, {6, 8}};
  auto r = snf(a);
  // d1 = gcd of entries = 2, d1*d2 = |det| = 8.
  CHECK(r.S == IntMatrix{{2, 0}, {0, 4}});
  CHECK(r.U * a * r.V == r.S);
}

TEST_CASE("snf degenerate shapes") {
  CHECK(snf(IntMatrix(0, 0)).S.rows() == 0);
  CHECK(snf(IntMatrix{{0, 0}}).S == IntMatrix{{0, 0}});
  auto r = snf(IntMatrix{{-6}});
  CHECK(r.S == IntMatrix{{6}});
  auto r2 = snf(IntMatrix{{4, 6, 10}});
  CHECK(r2.S == IntMatrix{{2, 0, 0}});
}

TEST_CASE("determinant, rank, kernel") {
  CHECK(determinant(IntMatrix{{2, 4}, {6, 8}}) == -8);
  CHECK(rank_q(IntMatrix{{1, 2}, {2, 4}}) == 1);
  auto k = integer_kernel(IntMatrix{{1, 2}, {2, 4}});
  CHECK(k.cols() == 1);
  CHECK((IntMatrix{{1, 2}, {2, 4}} * k).is_zero());
  auto x = solve_integer(IntMatrix{{2, 0}, {0, 3}}, {4, 9});
  REQUIRE(x);
  CHECK((*x)[0] == 2);
  CHECK((*x)[1] == 3);
  CHECK_FALSE(solve_integer(IntMatrix{{2}}, {3}));
}

TEST_CASE("hermite basis is canonical") {
  const IntMatrix a{{2, 4}, {0, 6}};
  const IntMatrix b{{2, 6}, {0, 6}};
  CHECK(hermite_basis(a) == hermite_basis(b));
  CHECK(hermite_basis(a) == hermite_basis(hcat(a, IntMatrix{{4}, {6}})));
}

TEST_CASE("fg_invariants") {
  auto inv = fg_invariants(FgPresentation(2, IntMatrix{{2, 0}, {0, 3}}));
  CHECK(inv.free_rank == 0);
  REQUIRE(inv.invariant_factors.size() == 1);
  CHECK(inv.invariant_factors[0] == 6);
  auto inv2 = fg_invariants(FgPresentation(3, IntMatrix{{4}, {0}, {0}}));
  CHECK(inv2.free_rank == 2);
  CHECK(inv2.invariant_factors == std::vector<BigInt>{4});
  CHECK_THROWS_AS(FgPresentation(2, IntMatrix{{1}}), Error);
}

TEST_CASE("descriptor bridges") {
  auto d = to_descriptor(FgPresentation(1, IntMatrix{{6}}));
  CHECK(d == direct_sum(GroupDescriptor::of(Atom::cyclic(2, 1)),
                        GroupDescriptor::of(Atom::cyclic(3, 1))));
  auto p = to_presentation(direct_sum(GroupDescriptor::of(Atom::free_int(), 2),
                                      GroupDescriptor::of(Atom::cyclic(2, 2))));
  CHECK(p.free_rank() == 2);
  CHECK(p.invariant_factors() == std::vector<BigInt>{4});
  try {
    to_presentation(GroupDescriptor::of(Atom::rationals()));
    FAIL("expected NotFinitelyGenerated");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::NotFinitelyGenerated);
  }
  CHECK_THROWS_AS(to_presentation(GroupDescriptor::of(Atom::cyclic(2, 1), Mult::omega())),
                  Error);
}

TEST_CASE("homomorphisms") {
  const FgPresentation z(1);
  const FgPresentation z4(1, IntMatrix{{4}});
  const FgHom mod4{z, z4, IntMatrix{{1}}};
  CHECK(hom_check(mod4));
  CHECK(is_surjective(mod4));
  CHECK(kernel_rank(mod4) == 1);
  CHECK(hermite_basis(kernel_lattice(mod4)) == IntMatrix{{4}});
  // Z(4) -> Z by 1 is not well defined.
  CHECK_FALSE(hom_check(FgHom{z4, z, IntMatrix{{1}}}));
  // Z(2) + Z(3) -> Z(6) as (3, 2) is an isomorphism.
  const FgPresentation z2z3(2, IntMatrix{{2, 0}, {0, 3}});
  const FgPresentation z6(1, IntMatrix{{6}});
  const FgHom iso{z2z3, z6, IntMatrix{{3, 2}}};
  CHECK(hom_check(iso));
  CHECK(is_surjective(iso));
  CHECK(kernel_rank(iso) == 0);
  CHECK(kernel_pres(iso).free_rank() == 0);
  CHECK(fg_invariants(kernel_pres(iso)).invariant_factors.empty());
  // doubling on Z is not surjective, image has index 2
  const FgHom dbl{z, z, IntMatrix{{2}}};
  CHECK_FALSE(is_surjective(dbl));
  CHECK(image_pres(dbl).free_rank() == 1);
  const FgHom c = compose(mod4, dbl);
  CHECK(c.matrix == IntMatrix{{2}});
  CHECK(kernel_rank(c) == 1);
  CHECK(is_zero_element(z4, {8}));
  CHECK(has_infinite_order(FgPresentation(2, IntMatrix{{2}, {0}}), {0, 1}));
  CHECK_FALSE(has_infinite_order(FgPresentation(2, IntMatrix{{2}, {0}}), {1, 0}));
}

TEST_CASE("matrix text format") {
  auto m = IntMatrix::parse("2 3\n1 -2 3\n0 0 7\n");
  CHECK(m == IntMatrix{{1, -2, 3}, {0, 0, 7}});
  CHECK(IntMatrix::parse(m.str()) == m);
  CHECK_THROWS_AS(IntMatrix::parse("2 2\n1 2 3"), Error);
  CHECK_THROWS_AS(IntMatrix::parse("65 1\n"), Error);
}

TEST_CASE("property: snf contract on random matrices") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> entry(-99, 99);
  for (int t = 0; t < 300; ++t) {
    const std::size_t r = 1 + rng() % 8, c = 1 + rng() % 8;
    IntMatrix a(r, c);
    BigInt g = 0;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        a(i, j) = entry(rng);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a(i, j).get_mpz_t());
      }
    auto res = snf(a);
    CHECK(res.U * a * res.V == res.S);
    CHECK(is_diagonal_chain(res.S));
    CHECK(abs_det(res.U) == 1);
    CHECK(abs_det(res.V) == 1);
    CHECK(res.S(0, 0) == g);
    if (r == c) {
      BigInt prod = 1;
      for (std::size_t i = 0; i < r; ++i) prod *= res.S(i, i);
      CHECK(prod == abs_det(a));
    }
  }
}
