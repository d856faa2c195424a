#pragma once

// Ground truth on finite groups by element enumeration. Nothing here calls
// the closed-form invariants of descriptor.hpp; only realize() reads a
// descriptor, and only to list its cyclic factors.

#include "quasitame/descriptor.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace quasitame::oracle {

inline constexpr std::uint64_t kMaxOrder = 4096;
inline constexpr std::uint64_t kDefaultSweepOrder = 512;

/// A subgroup of Z(m_1) ⊕ ... ⊕ Z(m_r), elements stored as residue tuples
/// packed in mixed radix.
class FiniteGroupTable {
public:
  FiniteGroupTable(std::vector<std::uint64_t> moduli,
                   std::vector<std::uint32_t> elements);

  const std::vector<std::uint64_t> &factor_moduli() const { return moduli_; }
  const std::vector<std::uint32_t> &elements() const { return elements_; }
  std::uint64_t order() const { return elements_.size(); }

  std::vector<std::uint64_t> residues(std::uint32_t element) const;
  std::uint32_t pack(const std::vector<std::uint64_t> &residues) const;
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t scale(std::uint64_t c, std::uint32_t a) const;
  std::uint64_t element_order(std::uint32_t a) const;
  bool contains(std::uint32_t a) const;
  FiniteGroupTable subset(std::vector<std::uint32_t> elements) const;
  /// Primes dividing some factor modulus.
  std::vector<std::uint64_t> primes() const;

private:
  std::vector<std::uint64_t> moduli_;
  std::vector<std::uint32_t> elements_; // sorted
};

FiniteGroupTable realize(const GroupDescriptor &g);

std::uint64_t brute_rank(const FiniteGroupTable &t);
/// log_p |{x in p^n A : p x = 0}|
std::uint64_t brute_rank_of_multiple(const FiniteGroupTable &t, std::uint64_t p,
                                     std::uint64_t n);
std::uint64_t brute_final_rank(const FiniteGroupTable &t, std::uint64_t p);
FiniteGroupTable brute_p_primary(const FiniteGroupTable &t, std::uint64_t p);
std::uint64_t brute_exponent(const FiniteGroupTable &t);
FiniteGroupTable brute_divisible_part(const FiniteGroupTable &t);
/// Isomorphism type from the counts |{x : p^j x = 0}|.
GroupDescriptor recover_descriptor(const FiniteGroupTable &t);

/// Every finite abelian group of order <= max_order, in canonical order.
std::vector<GroupDescriptor> finite_groups_up_to(std::uint64_t max_order);

struct SweepMismatch {
  std::string group;
  std::string column;
  std::string symbolic;
  std::string enumerated;
};

struct SweepSummary {
  std::uint64_t max_order = 0;
  std::uint64_t groups = 0;
  std::uint64_t comparisons = 0;
  std::vector<SweepMismatch> mismatches;
};

/// Symbolic vs enumerated: rank, exponent, p-primary parts, divisible part
/// and the iterated r(p^n A) columns. Throws TooLarge above kMaxOrder.
SweepSummary sweep(std::uint64_t max_order);

} // namespace quasitame::oracle
