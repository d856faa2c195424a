#pragma once

// Symbolic countable discrete abelian groups: formal direct sums of
// Z, Q, Z(p^k) and Z(p^inf), plus exponent-unbounded cyclic "towers".

#include "quasitame/bigint.hpp"
#include "quasitame/mult.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace quasitame {

// Declaration order is the canonical atom order.
enum class AtomKind { FreeInt, Rationals, Cyclic, Prufer };

struct Atom {
  AtomKind kind = AtomKind::FreeInt;
  std::uint64_t p = 0; // prime for Cyclic / Prufer
  std::uint64_t k = 0; // exponent for Cyclic

  static Atom free_int() { return {AtomKind::FreeInt, 0, 0}; }
  static Atom rationals() { return {AtomKind::Rationals, 0, 0}; }
  static Atom cyclic(std::uint64_t p, std::uint64_t k);
  static Atom prufer(std::uint64_t p);

  bool is_torsion_free() const {
    return kind == AtomKind::FreeInt || kind == AtomKind::Rationals;
  }
  bool is_divisible() const {
    return kind == AtomKind::Rationals || kind == AtomKind::Prufer;
  }

  /// DSL spelling: Z, Q, C(4), C(3^inf).
  std::string str() const;

  friend auto operator<=>(const Atom &, const Atom &) = default;
  friend bool operator==(const Atom &, const Atom &) = default;
};

/// Multiplicity rule for Z(p^k), k >= start:
/// mult = pattern[(k - start) % pattern.size()].
/// Canonical when pattern has minimal period and start is minimal.
struct Tower {
  std::uint64_t start = 1;
  std::vector<Mult> pattern;

  Mult at(std::uint64_t k) const {
    return pattern[(k - start) % pattern.size()];
  }
  friend bool operator==(const Tower &, const Tower &) = default;
};

class GroupDescriptor {
public:
  GroupDescriptor() = default;

  static GroupDescriptor of(Atom atom, Mult mult = 1);
  /// ⊕_{j>=0} Z(p^(start + j*step))^mult.
  static GroupDescriptor tower(std::uint64_t p, std::uint64_t start,
                               std::uint64_t step = 1, Mult mult = 1);
  static GroupDescriptor with_tower(std::uint64_t p, Tower tower);

  const std::map<Atom, Mult> &atoms() const { return atoms_; }
  const std::map<std::uint64_t, Tower> &towers() const { return towers_; }

  /// Multiplicity of an atom, reading through towers for Cyclic atoms.
  Mult mult(const Atom &atom) const;
  bool is_trivial() const { return atoms_.empty() && towers_.empty(); }
  std::set<std::uint64_t> primes() const;

  void add(const Atom &atom, Mult mult);
  void add_tower(std::uint64_t p, const Tower &tower);
  void add(const GroupDescriptor &other);

  /// DSL text, e.g. "C(2) + C(3)", "Z^omega", "tower(2, 1)"; "0" if trivial.
  std::string str() const;

  friend bool operator==(const GroupDescriptor &,
                         const GroupDescriptor &) = default;

private:
  void materialize(std::uint64_t p, std::uint64_t new_start);
  void normalize(std::uint64_t p);

  std::map<Atom, Mult> atoms_;
  std::map<std::uint64_t, Tower> towers_;
};

struct RawSummand {
  std::variant<std::int64_t, Atom> what; // cyclic order n, or an atom
  Mult mult = 1;
};

GroupDescriptor canonicalize(const std::vector<RawSummand> &raw);
GroupDescriptor direct_sum(const GroupDescriptor &a, const GroupDescriptor &b);

bool is_torsion(const GroupDescriptor &g);
bool is_finite(const GroupDescriptor &g);
/// Absent when the group is unbounded (non-torsion, Prüfer atom or tower).
std::optional<BigInt> exponent(const GroupDescriptor &g);
/// Order of a finite descriptor; absent otherwise.
std::optional<BigInt> order(const GroupDescriptor &g);

CardinalCount rank(const GroupDescriptor &g);
GroupDescriptor p_primary(const GroupDescriptor &g, std::uint64_t p);
bool is_p_group(const GroupDescriptor &g, std::uint64_t p);

/// r(p^n g) by closed form; g must be a p-group.
CardinalCount rank_of_multiple(const GroupDescriptor &g, std::uint64_t p,
                               std::uint64_t n);
/// Formal p^n-multiple of a p-group: cyclic exponents shift down by n.
GroupDescriptor p_multiple(const GroupDescriptor &g, std::uint64_t p,
                           std::uint64_t n);
CardinalCount final_rank(const GroupDescriptor &g, std::uint64_t p);

struct DivisibleSplit {
  GroupDescriptor reduced;
  GroupDescriptor divisible;
};
DivisibleSplit split_divisible(const GroupDescriptor &g);

bool is_divisible(const GroupDescriptor &g);
bool is_reduced(const GroupDescriptor &g);
bool is_dsc(const GroupDescriptor &g);
bool iso_eq(const GroupDescriptor &a, const GroupDescriptor &b);

/// Partition of the exponent support of a reduced p-group's tower into
/// `pieces` infinite sub-families. Each sub-family is an unbounded cyclic
/// tower and maps onto a copy of Z(p^inf) through the direct-limit quotient.
///
/// Support index i enumerates the exponents with nonzero multiplicity in
/// increasing order. With finitely many pieces N, index i belongs to class
/// i mod N; with ω pieces, to class v2(i + 1) (classes are the arithmetic
/// progressions i ≡ 2^j - 1 mod 2^(j+1)).
struct QuotientWitnessSpec {
  std::uint64_t p = 0;
  Tower support;
  Mult pieces;

  std::uint64_t support_exponent(std::uint64_t index) const;
  std::uint64_t class_of(std::uint64_t index) const;
  /// First `count` support exponents in class j.
  std::vector<std::uint64_t> class_exponents(std::uint64_t j,
                                             std::size_t count) const;
  std::string rule() const;

  friend bool operator==(const QuotientWitnessSpec &,
                         const QuotientWitnessSpec &) = default;
};

QuotientWitnessSpec prufer_quotient_witness(const GroupDescriptor &g,
                                            std::uint64_t p, Mult pieces);

/// Structural re-check of a quotient witness against a group: the support
/// must be g's tower at p and every inspected class infinite and unbounded.
bool check_quotient_witness(const QuotientWitnessSpec &spec,
                            const GroupDescriptor &g);

} // namespace quasitame
