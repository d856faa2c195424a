#pragma once

// Exact integer linear algebra for presentations of finitely generated
// abelian groups. No floating point anywhere in this module.

#include "quasitame/bigint.hpp"
#include "quasitame/descriptor.hpp"

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace quasitame {

/// Input matrices are capped at kMaxMatrixDim rows and columns.
inline constexpr std::size_t kMaxMatrixDim = 64;

class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix column(const std::vector<BigInt> &v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  BigInt &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const BigInt &operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::vector<BigInt> col(std::size_t j) const;
  IntMatrix transpose() const;
  /// Columns [from, to).
  IntMatrix col_range(std::size_t from, std::size_t to) const;
  IntMatrix row_range(std::size_t from, std::size_t to) const;
  bool is_zero() const;

  friend IntMatrix operator*(const IntMatrix &a, const IntMatrix &b);
  friend bool operator==(const IntMatrix &a, const IntMatrix &b);

  /// "rows cols" then row-major entries, one row per line.
  std::string str() const;
  /// Parses the text format; throws SyntaxError / SizeError.
  static IntMatrix parse(const std::string &text);

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

/// [a | b]
IntMatrix hcat(const IntMatrix &a, const IntMatrix &b);
IntMatrix block_diag(const IntMatrix &a, const IntMatrix &b);

struct SnfResult {
  IntMatrix U, S, V; // U * A * V == S
};

/// Smith normal form with unimodular transforms. Pivoting picks the
/// smallest nonzero absolute value in the active block.
SnfResult snf(const IntMatrix &a);

/// Exact determinant (fraction-free Bareiss elimination).
BigInt determinant(const IntMatrix &a);
/// Rank over Q.
std::size_t rank_q(const IntMatrix &a);
/// Basis (as columns) of the integer solutions of a * x = 0.
IntMatrix integer_kernel(const IntMatrix &a);
/// Canonical Hermite basis (columns) of the lattice spanned by the columns.
IntMatrix hermite_basis(const IntMatrix &generators);
/// Some integer x with a * x == b, if one exists.
std::optional<std::vector<BigInt>> solve_integer(const IntMatrix &a,
                                                 const std::vector<BigInt> &b);

/// Abelian group on `generators` generators modulo the column span of
/// `relations` (a generators × k matrix).
class FgPresentation {
public:
  FgPresentation() = default;
  FgPresentation(std::size_t generators, IntMatrix relations);
  explicit FgPresentation(std::size_t generators)
      : FgPresentation(generators, IntMatrix(generators, 0)) {}

  std::size_t generators() const { return generators_; }
  const IntMatrix &relations() const { return relations_; }
  /// Both computed on first use and cached.
  std::size_t free_rank() const;
  /// d1 | d2 | ... , each >= 2.
  const std::vector<BigInt> &invariant_factors() const;
  bool is_finite() const { return free_rank() == 0; }

  friend bool operator==(const FgPresentation &a, const FgPresentation &b) {
    return a.generators_ == b.generators_ && a.relations_ == b.relations_;
  }

private:
  std::size_t generators_ = 0;
  IntMatrix relations_;
  mutable std::optional<std::size_t> free_rank_;
  mutable std::optional<std::vector<BigInt>> factors_;
};

struct FgInvariants {
  std::size_t free_rank = 0;
  std::vector<BigInt> invariant_factors;
};

FgInvariants fg_invariants(const FgPresentation &p);
GroupDescriptor to_descriptor(const FgPresentation &p);
/// Presentation of a finitely generated descriptor (no Q, Prüfer, towers
/// or ω multiplicities); throws NotFinitelyGenerated otherwise.
FgPresentation to_presentation(const GroupDescriptor &g);
FgPresentation direct_sum(const FgPresentation &a, const FgPresentation &b);
/// Is the integer vector a relation (zero element) of the group?
bool is_zero_element(const FgPresentation &p, const std::vector<BigInt> &x);
/// Has the element infinite order?
bool has_infinite_order(const FgPresentation &p, const std::vector<BigInt> &x);

/// Homomorphism given on generators: matrix is target.generators() ×
/// source.generators().
struct FgHom {
  FgPresentation source;
  FgPresentation target;
  IntMatrix matrix;
};

bool hom_check(const FgHom &h);
/// g ∘ f
FgHom compose(const FgHom &g, const FgHom &f);
bool is_surjective(const FgHom &h);
/// Hermite basis (columns) of {x in Z^s : h(x) = 0 in the target}.
IntMatrix kernel_lattice(const FgHom &h);
FgPresentation kernel_pres(const FgHom &h);
std::size_t kernel_rank(const FgHom &h);
FgPresentation image_pres(const FgHom &h);

} // namespace quasitame
