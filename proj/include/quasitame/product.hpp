#pragma once

// Countable products ∏ G_n of discrete abelian groups given by an eventually
// periodic sequence of entry templates.

#include "quasitame/descriptor.hpp"

#include <cstdint>
#include <optional>
#include <tuple>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace quasitame {

/// a*n + b over the naturals.
struct Affine {
  std::uint64_t a = 0;
  std::uint64_t b = 0;

  bool is_constant() const { return a == 0; }
  std::uint64_t eval(std::uint64_t n) const; // throws TooLarge on overflow
  /// "3", "n", "n+1", "2*n", "2*n+1"
  std::string str() const;

  friend auto operator<=>(const Affine &, const Affine &) = default;
  friend bool operator==(const Affine &, const Affine &) = default;
};

/// A fixed prime, or PrimeAt(a*n+b): the (a*n+b)-th prime, 1-based.
struct PrimeRef {
  bool at = false;
  std::uint64_t p = 0; // fixed prime when !at
  Affine index;        // when at

  std::uint64_t eval(std::uint64_t n) const;
  std::string str() const;

  friend auto operator<=>(const PrimeRef &, const PrimeRef &) = default;
  friend bool operator==(const PrimeRef &, const PrimeRef &) = default;
};

enum class TermKind { Cyclic, Prufer, Tower };

/// A summand depending on n: a PrimeAt prime, an affine exponent or an
/// affine tower start.
struct ParamTerm {
  TermKind kind = TermKind::Cyclic;
  PrimeRef prime;
  Affine exp;              // cyclic exponent, or tower start
  std::uint64_t step = 1;  // towers only
  Mult mult = 1;

  GroupDescriptor instantiate(std::uint64_t n) const;
  bool is_constant() const { return !prime.at && exp.is_constant(); }
  std::string str() const;

  /// Ordering key; mult excluded.
  auto key() const { return std::tie(kind, prime, exp, step); }
  friend bool operator==(const ParamTerm &, const ParamTerm &) = default;
};

class EntryTemplate {
public:
  EntryTemplate() = default;
  explicit EntryTemplate(GroupDescriptor base) : base_(std::move(base)) {}
  /// Folds constant terms into the base, merges equal terms, drops zero
  /// multiplicities and sorts. Throws on invalid exponents or primes.
  EntryTemplate(GroupDescriptor base, std::vector<ParamTerm> terms);

  const GroupDescriptor &base() const { return base_; }
  const std::vector<ParamTerm> &terms() const { return terms_; }
  bool is_constant() const { return terms_.empty(); }

  GroupDescriptor instantiate(std::uint64_t n) const;
  /// Fixed-prime p content only (PrimeAt terms dropped).
  EntryTemplate fixed_p_part(std::uint64_t p) const;
  std::set<std::uint64_t> fixed_primes() const;
  bool is_torsion() const { return quasitame::is_torsion(base_); }

  /// DSL text, "0" when trivial.
  std::string str() const;

  friend bool operator==(const EntryTemplate &, const EntryTemplate &) = default;

private:
  GroupDescriptor base_;
  std::vector<ParamTerm> terms_;
};

struct SequenceSpec {
  std::vector<GroupDescriptor> prefix;
  std::vector<EntryTemplate> tail; // nonempty

  std::uint64_t prefix_length() const { return prefix.size(); }
  std::uint64_t period() const { return tail.size(); }
  /// Tail position of index n >= prefix_length().
  std::uint64_t position(std::uint64_t n) const { return (n - prefix.size()) % tail.size(); }

  /// "prod n: [d0, d1] t0; t1"
  std::string str() const;
  friend bool operator==(const SequenceSpec &, const SequenceSpec &) = default;
};

GroupDescriptor seq_nth(const SequenceSpec &spec, std::uint64_t n);

enum class PredKind {
  Torsion,
  Finite,
  Bounded,
  PSylowGood,
  PPartTrivial,
  NonTorsionInfinitelyOften,
};

struct Predicate {
  PredKind kind = PredKind::Torsion;
  std::uint64_t p = 0;
};

bool holds_at(const GroupDescriptor &g, Predicate pred);

struct Eventually {
  bool holds = false;
  /// Least N with the predicate true for all n >= N. For
  /// NonTorsionInfinitelyOften: the prefix length (periodic from there).
  std::optional<std::uint64_t> threshold;
};

Eventually eventually(const SequenceSpec &spec, Predicate pred);

/// Per tail position, the indices n >= prefix length where a PrimeAt term of
/// that position produces the prime p (at most one per term).
std::vector<std::uint64_t> prime_hits(const SequenceSpec &spec, std::size_t position,
                                      std::uint64_t p, bool bad_terms_only);

// ---------------------------------------------------------------------------
// Verdict payloads

struct PrimeForm {
  std::uint64_t p = 0;
  std::uint64_t threshold = 0;
  /// Per tail position: p_primary(G_n) = F(n) ⊕ Z(p^inf)^k for n >= threshold.
  std::vector<EntryTemplate> F;
  std::vector<std::uint64_t> k;
  friend bool operator==(const PrimeForm &, const PrimeForm &) = default;
};

/// The primes p(a*n+b) at one tail position; each such prime occurs at
/// finitely many n, so its Sylow part is eventually trivial.
struct FamilyTag {
  std::uint64_t position = 0;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  friend auto operator<=>(const FamilyTag &, const FamilyTag &) = default;
  friend bool operator==(const FamilyTag &, const FamilyTag &) = default;
};

struct TameCertificate {
  std::uint64_t torsion_threshold = 0;
  std::vector<PrimeForm> primes;
  std::vector<FamilyTag> families;
  friend bool operator==(const TameCertificate &, const TameCertificate &) = default;
};

struct IndexRule {
  std::uint64_t start = 0;
  std::uint64_t period = 1;
  std::vector<std::uint64_t> positions;
  friend bool operator==(const IndexRule &, const IndexRule &) = default;
};

enum class SylowKind { BoundedDsc, DivisibleQuotient, DivisibleSummand };
const char *to_string(SylowKind k);
std::optional<SylowKind> parse_sylow_kind(const std::string &s);
/// Description of the kernel L for each witness kind.
std::string kernel_tag(SylowKind k, std::uint64_t p);

struct SylowEntry {
  std::uint64_t position = 0;
  SylowKind kind = SylowKind::BoundedDsc;
  /// BoundedDsc: the ω-multiplicity cyclic part B_n. DivisibleQuotient: the
  /// tower support. DivisibleSummand: Z(p^inf)^omega.
  EntryTemplate group;
  Mult pieces = Mult::omega(); // DivisibleQuotient only
  std::string kernel_tag;
  friend bool operator==(const SylowEntry &, const SylowEntry &) = default;
};

enum class WitnessKind { ZN, SylowProduct };

/// Which product the witness lives in: the reduced part R, the divisible
/// part D, or the whole group G.
enum class Part { R, D, G };
const char *to_string(Part p);
std::optional<Part> parse_part(const std::string &s);

struct Witness {
  WitnessKind kind = WitnessKind::ZN;
  Part part = Part::G;
  IndexRule indices;
  std::vector<Atom> atoms;         // ZN: per listed position
  std::uint64_t p = 0;             // SylowProduct
  std::vector<SylowEntry> entries; // SylowProduct: per listed position
  friend bool operator==(const Witness &, const Witness &) = default;
};

struct TraceStep {
  std::string id;
  std::string theorem;
  std::string detail;
  friend bool operator==(const TraceStep &, const TraceStep &) = default;
};

using Payload = std::variant<TameCertificate, Witness>;

struct Verdict {
  bool tame = false;
  bool relatively_tame = false;
  std::vector<TraceStep> trace;
  Payload payload;
};

// ---------------------------------------------------------------------------
// Classification

Verdict solecki_check(const SequenceSpec &spec);

struct Decomposition {
  SequenceSpec R;
  SequenceSpec D;
};
Decomposition decompose(const SequenceSpec &spec);

/// Requires every entry reduced (NotReduced otherwise).
Verdict reduced_classify(const SequenceSpec &spec);
/// case 1: ZN; case 2: SylowProduct at p (smallest failing prime if absent).
Witness witness_extract(const SequenceSpec &spec, int clause,
                        std::optional<std::uint64_t> p = std::nullopt, Part part = Part::G);
/// Canonical certificate of a tame product.
TameCertificate tame_certificate(const SequenceSpec &spec);

struct ClassifyOptions {
  bool explain = false;
};
Verdict classify(const SequenceSpec &spec, ClassifyOptions opts = {});

/// Independent re-validation by sampling; returns the problems found.
std::vector<std::string> check_certificate(const SequenceSpec &spec, const TameCertificate &c);
std::vector<std::string> check_witness(const SequenceSpec &spec, const Witness &w);

} // namespace quasitame
