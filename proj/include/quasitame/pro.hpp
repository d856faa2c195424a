#pragma once

// Inverse limits of surjective systems of finitely generated abelian groups.
//
// Levels 0..P-1 are given explicitly. From level P on, level n is
// T ⊕ A^(n-P+1): a stationary block T plus one more copy of the accumulating
// block A per step. Relations of copy j may spill into copy j+1 through the
// coupling matrix C (the last copy has no spill). The step map from level
// n+1 to level n (n >= P) is descent on T, the identity on the older copies,
// and zero on the newest copy.

#include "quasitame/linalg.hpp"
#include "quasitame/product.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace quasitame {

struct TailBlock {
  FgPresentation level;                  // T
  std::optional<FgPresentation> accumulate; // A
  std::optional<IntMatrix> coupling;     // C: A.generators × A.relations columns
  IntMatrix descent;                     // T -> T
  IntMatrix splice;                      // T ⊕ A -> last prefix level
  friend bool operator==(const TailBlock &, const TailBlock &) = default;
};

struct InverseSystem {
  std::vector<FgPresentation> prefix_levels;
  std::vector<IntMatrix> prefix_maps; // map i: level i+1 -> level i
  TailBlock tail;

  std::size_t prefix_length() const { return prefix_levels.size(); }
  friend bool operator==(const InverseSystem &, const InverseSystem &) = default;
};

/// Empty iff valid.
std::vector<std::string> system_check(const InverseSystem &s);

FgPresentation level(const InverseSystem &s, std::size_t n);
/// Step map level n+1 -> level n.
FgHom step_map(const InverseSystem &s, std::size_t n);
/// Composite level m -> level n; throws IndexOrder unless m > n.
FgHom bonding(const InverseSystem &s, std::size_t m, std::size_t n);

/// |prefix| + free_rank(level |prefix|) + 1
std::size_t default_horizon(const InverseSystem &s);

bool is_compact(const InverseSystem &s, std::optional<std::size_t> horizon = std::nullopt);
bool is_locally_compact(const InverseSystem &s,
                        std::optional<std::size_t> horizon = std::nullopt);

struct ProCertificate {
  std::size_t n0 = 0;     // least n with torsion kernels of every bonding(m, n)
  std::size_t horizon = 0;
  friend bool operator==(const ProCertificate &, const ProCertificate &) = default;
};

struct KernelWitness {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t rank = 0;
  IntMatrix basis; // Hermite basis of ker(bonding(m, n)) in Z^gens(level m)
  friend bool operator==(const KernelWitness &, const KernelWitness &) = default;
};

struct ProWitness {
  std::size_t horizon = 0;
  std::size_t increment = 0; // eventual growth of the level free rank per step
  std::vector<KernelWitness> kernels; // n = 0..|prefix|, m = n + horizon
  friend bool operator==(const ProWitness &, const ProWitness &) = default;
};

struct ProVerdict {
  bool tame = false;
  bool relatively_tame = false;
  bool compact = false;
  bool locally_compact = false;
  std::vector<TraceStep> trace;
  std::variant<ProCertificate, ProWitness> payload;
};

/// Throws InvalidSystem on a failing system_check, InconclusiveHorizon when
/// the rank increment has not settled at the horizon.
ProVerdict classify_pro(const InverseSystem &s, std::optional<std::size_t> horizon = std::nullopt,
                        bool explain = false);

std::vector<std::string> check_pro_certificate(const InverseSystem &s, const ProCertificate &c);
std::vector<std::string> check_pro_witness(const InverseSystem &s, const ProWitness &w);

/// Partial products G_0 ⊕ ... ⊕ G_n with coordinate-forgetting maps; the
/// tail period is blocked into one accumulating copy.
InverseSystem product_embed(const SequenceSpec &g);

} // namespace quasitame
