#include "quasitame/linalg.hpp"

#include "quasitame/error.hpp"
#include "quasitame/primes.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace quasitame {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto &r : rows) {
    if (r.size() != cols_)
      throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::column(const std::vector<BigInt> &v) {
  IntMatrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

std::vector<BigInt> IntMatrix::col(std::size_t j) const {
  std::vector<BigInt> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::col_range(std::size_t from, std::size_t to) const {
  IntMatrix out(rows_, to - from);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = from; j < to; ++j) out(i, j - from) = (*this)(i, j);
  return out;
}

IntMatrix IntMatrix::row_range(std::size_t from, std::size_t to) const {
  IntMatrix out(to - from, cols_);
  for (std::size_t i = from; i < to; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i - from, j) = (*this)(i, j);
  return out;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const BigInt &v) { return sgn(v) == 0; });
}

IntMatrix operator*(const IntMatrix &a, const IntMatrix &b) {
  if (a.cols_ != b.rows_)
    throw Error(ErrorKind::DimensionMismatch, "matrix product shape");
  IntMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const BigInt &aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

bool operator==(const IntMatrix &a, const IntMatrix &b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string IntMatrix::str() const {
  std::ostringstream os;
  os << rows_ << " " << cols_ << "\n";
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j);
    os << "\n";
  }
  return os.str();
}

IntMatrix IntMatrix::parse(const std::string &text) {
  std::istringstream is(text);
  std::vector<std::string> tokens;
  for (std::string tok; is >> tok;) tokens.push_back(tok);
  auto bad = [](const std::string &what, const std::string &found) {
    return SyntaxError(1, 1, {what}, found);
  };
  auto to_dim = [&](std::size_t idx) -> std::size_t {
    if (idx >= tokens.size()) throw bad("matrix dimension", "end of input");
    const std::string &t = tokens[idx];
    if (t.empty() || !std::all_of(t.begin(), t.end(), ::isdigit) || t.size() > 6)
      throw bad("matrix dimension", t);
    return std::stoul(t);
  };
  const std::size_t rows = to_dim(0), cols = to_dim(1);
  if (rows > kMaxMatrixDim || cols > kMaxMatrixDim)
    throw Error(ErrorKind::SizeError, "matrix exceeds 64x64");
  if (tokens.size() != 2 + rows * cols)
    throw bad(std::to_string(rows * cols) + " entries",
              std::to_string(tokens.size() - 2) + " entries");
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i) {
    BigInt v;
    if (v.set_str(tokens[2 + i], 10) != 0) throw bad("integer", tokens[2 + i]);
    m(i / cols, i % cols) = v;
  }
  return m;
}

IntMatrix hcat(const IntMatrix &a, const IntMatrix &b) {
  if (a.rows() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "hcat rows");
  IntMatrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

IntMatrix block_diag(const IntMatrix &a, const IntMatrix &b) {
  IntMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      out(a.rows() + i, a.cols() + j) = b(i, j);
  return out;
}

namespace {

class SnfWorker {
public:
  explicit SnfWorker(const IntMatrix &a)
      : m_(a.rows()), n_(a.cols()), S_(a), U_(IntMatrix::identity(m_)),
        V_(IntMatrix::identity(n_)) {}

  SnfResult run() {
    const std::size_t d = std::min(m_, n_);
    for (std::size_t t = 0; t < d; ++t) {
      if (!reduce_block(t)) break;
      if (sgn(S_(t, t)) < 0) negate_row(t);
    }
    return {std::move(U_), std::move(S_), std::move(V_)};
  }

private:
  // Brings a gcd pivot to (t, t) that divides the whole remaining block.
  // Returns false if the block S[t.., t..] is zero.
  bool reduce_block(std::size_t t) {
    while (true) {
      if (!move_min_to(t)) return false;
      bool clean = true;
      for (std::size_t i = t + 1; i < m_; ++i) {
        if (sgn(S_(i, t)) == 0) continue;
        BigInt q = S_(i, t) / S_(t, t);
        add_row(i, t, -q);
        if (sgn(S_(i, t)) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n_; ++j) {
        if (sgn(S_(t, j)) == 0) continue;
        BigInt q = S_(t, j) / S_(t, t);
        add_col(j, t, -q);
        if (sgn(S_(t, j)) != 0) clean = false;
      }
      if (!clean) continue;
      bool divides = true;
      for (std::size_t i = t + 1; i < m_ && divides; ++i)
        for (std::size_t j = t + 1; j < n_; ++j) {
          BigInt r = S_(i, j) % S_(t, t);
          if (sgn(r) != 0) {
            add_row(t, i, 1);
            divides = false;
            break;
          }
        }
      if (divides) return true;
    }
  }

  bool move_min_to(std::size_t t) {
    std::size_t bi = m_, bj = n_;
    BigInt best;
    for (std::size_t i = t; i < m_; ++i)
      for (std::size_t j = t; j < n_; ++j) {
        if (sgn(S_(i, j)) == 0) continue;
        BigInt v = abs(S_(i, j));
        if (bi == m_ || v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (bi == m_) return false;
    swap_rows(t, bi);
    swap_cols(t, bj);
    return true;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < n_; ++j) std::swap(S_(a, j), S_(b, j));
    for (std::size_t j = 0; j < m_; ++j) std::swap(U_(a, j), U_(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m_; ++i) std::swap(S_(i, a), S_(i, b));
    for (std::size_t i = 0; i < n_; ++i) std::swap(V_(i, a), V_(i, b));
  }
  // row dst += q * row src
  void add_row(std::size_t dst, std::size_t src, const BigInt &q) {
    for (std::size_t j = 0; j < n_; ++j) S_(dst, j) += q * S_(src, j);
    for (std::size_t j = 0; j < m_; ++j) U_(dst, j) += q * U_(src, j);
  }
  void add_col(std::size_t dst, std::size_t src, const BigInt &q) {
    for (std::size_t i = 0; i < m_; ++i) S_(i, dst) += q * S_(i, src);
    for (std::size_t i = 0; i < n_; ++i) V_(i, dst) += q * V_(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < n_; ++j) S_(r, j) = -S_(r, j);
    for (std::size_t j = 0; j < m_; ++j) U_(r, j) = -U_(r, j);
  }

  std::size_t m_, n_;
  IntMatrix S_, U_, V_;
};

std::size_t diagonal_rank(const IntMatrix &s) {
  std::size_t r = 0;
  while (r < std::min(s.rows(), s.cols()) && sgn(s(r, r)) != 0) ++r;
  return r;
}

} // namespace

SnfResult snf(const IntMatrix &a) { return SnfWorker(a).run(); }

BigInt determinant(const IntMatrix &a) {
  if (a.rows() != a.cols())
    throw Error(ErrorKind::DimensionMismatch, "determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(m(k, k)) == 0) {
      std::size_t r = k + 1;
      while (r < n && sgn(m(r, k)) == 0) ++r;
      if (r == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(r, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = v;
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

std::size_t rank_q(const IntMatrix &a) {
  IntMatrix m = a;
  std::size_t r = 0;
  BigInt prev = 1;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(p, j));
    // Bareiss: the division by the previous pivot is exact.
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      for (std::size_t j = c + 1; j < m.cols(); ++j) {
        m(i, j) = m(i, j) * m(r, c) - m(r, j) * m(i, c);
        if (prev != 1) mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
      }
      m(i, c) = 0;
    }
    prev = m(r, c);
    ++r;
  }
  return r;
}

IntMatrix integer_kernel(const IntMatrix &a) {
  SnfResult f = snf(a);
  return f.V.col_range(diagonal_rank(f.S), a.cols());
}

IntMatrix hermite_basis(const IntMatrix &generators) {
  const std::size_t n = generators.rows();
  std::vector<std::vector<BigInt>> rows;
  for (std::size_t j = 0; j < generators.cols(); ++j) rows.push_back(generators.col(j));
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
    bool found = false;
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i)
        if (sgn(rows[i][c]) != 0 &&
            (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c])))
          best = i;
      if (best == rows.size()) break;
      found = true;
      std::swap(rows[r], rows[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (sgn(rows[i][c]) == 0) continue;
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
        for (std::size_t j = c; j < n; ++j) rows[i][j] -= q * rows[r][j];
        if (sgn(rows[i][c]) != 0) done = false;
      }
      if (done) break;
    }
    if (!found) continue;
    if (sgn(rows[r][c]) < 0)
      for (auto &v : rows[r]) v = -v;
    for (std::size_t i = 0; i < r; ++i) {
      BigInt q;
      mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
      if (sgn(q) == 0) continue;
      for (std::size_t j = c; j < n; ++j) rows[i][j] -= q * rows[r][j];
    }
    ++r;
  }
  IntMatrix out(n, r);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < n; ++i) out(i, j) = rows[j][i];
  return out;
}

namespace {

std::optional<std::vector<BigInt>> solve_snf(const SnfResult &f, std::size_t cols,
                                             const std::vector<BigInt> &b) {
  IntMatrix c = f.U * IntMatrix::column(b);
  const std::size_t r = diagonal_rank(f.S);
  std::vector<BigInt> y(cols);
  for (std::size_t i = 0; i < c.rows(); ++i) {
    if (i < r) {
      if (sgn(BigInt(c(i, 0) % f.S(i, i))) != 0) return std::nullopt;
      y[i] = c(i, 0) / f.S(i, i);
    } else if (sgn(c(i, 0)) != 0) {
      return std::nullopt;
    }
  }
  return (f.V * IntMatrix::column(y)).col(0);
}

} // namespace

std::optional<std::vector<BigInt>> solve_integer(const IntMatrix &a,
                                                 const std::vector<BigInt> &b) {
  if (b.size() != a.rows())
    throw Error(ErrorKind::DimensionMismatch, "right-hand side length");
  return solve_snf(snf(a), a.cols(), b);
}

FgPresentation::FgPresentation(std::size_t generators, IntMatrix relations)
    : generators_(generators), relations_(std::move(relations)) {
  if (relations_.rows() != generators_)
    throw Error(ErrorKind::DimensionMismatch,
                "relation matrix must have one row per generator");
}

std::size_t FgPresentation::free_rank() const {
  if (!free_rank_) free_rank_ = generators_ - rank_q(relations_);
  return *free_rank_;
}

const std::vector<BigInt> &FgPresentation::invariant_factors() const {
  if (!factors_) {
    const SnfResult f = snf(relations_);
    const std::size_t r = diagonal_rank(f.S);
    if (generators_ - r != free_rank()) throw Error(ErrorKind::Internal, "SNF rank disagrees with rank_q");
    std::vector<BigInt> out;
    for (std::size_t i = 0; i < r; ++i)
      if (f.S(i, i) > 1) out.push_back(f.S(i, i));
    factors_ = std::move(out);
  }
  return *factors_;
}

FgInvariants fg_invariants(const FgPresentation &p) {
  return {p.free_rank(), p.invariant_factors()};
}

GroupDescriptor to_descriptor(const FgPresentation &p) {
  GroupDescriptor g;
  g.add(Atom::free_int(), p.free_rank());
  for (const BigInt &d : p.invariant_factors()) {
    if (d > big(primes::kFactorBound))
      throw Error(ErrorKind::FactorizationOverflow,
                  "invariant factor " + d.get_str() + " exceeds 2^63");
    for (auto [q, e] : primes::factorize(to_u64(d))) g.add(Atom::cyclic(q, e), 1);
  }
  return g;
}

FgPresentation to_presentation(const GroupDescriptor &g) {
  if (!g.towers().empty())
    throw Error(ErrorKind::NotFinitelyGenerated, g.str() + " has a tower");
  std::vector<BigInt> orders; // 0 for a free generator
  for (const auto &[a, m] : g.atoms()) {
    if (m.is_omega() || a.is_divisible())
      throw Error(ErrorKind::NotFinitelyGenerated, g.str());
    for (std::uint64_t i = 0; i < m.value(); ++i)
      orders.push_back(a.kind == AtomKind::FreeInt ? BigInt(0) : pow_u64(a.p, a.k));
  }
  std::size_t torsion = 0;
  for (const auto &o : orders) torsion += sgn(o) != 0;
  IntMatrix rel(orders.size(), torsion);
  std::size_t col = 0;
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (sgn(orders[i]) != 0) rel(i, col++) = orders[i];
  return FgPresentation(orders.size(), std::move(rel));
}

FgPresentation direct_sum(const FgPresentation &a, const FgPresentation &b) {
  return FgPresentation(a.generators() + b.generators(),
                        block_diag(a.relations(), b.relations()));
}

bool is_zero_element(const FgPresentation &p, const std::vector<BigInt> &x) {
  return solve_integer(p.relations(), x).has_value();
}

bool has_infinite_order(const FgPresentation &p, const std::vector<BigInt> &x) {
  return rank_q(hcat(p.relations(), IntMatrix::column(x))) > p.generators() - p.free_rank();
}

namespace {

void require_shape(const FgHom &h) {
  if (h.matrix.rows() != h.target.generators() ||
      h.matrix.cols() != h.source.generators())
    throw Error(ErrorKind::DimensionMismatch,
                "hom matrix must be target generators x source generators");
}

void require_well_defined(const FgHom &h) {
  if (!hom_check(h))
    throw Error(ErrorKind::IllFormedHom, "relators do not map to relations");
}

} // namespace

bool hom_check(const FgHom &h) {
  require_shape(h);
  IntMatrix images = h.matrix * h.source.relations();
  if (images.is_zero()) return true;
  const SnfResult f = snf(h.target.relations());
  for (std::size_t j = 0; j < images.cols(); ++j)
    if (!solve_snf(f, h.target.relations().cols(), images.col(j))) return false;
  return true;
}

FgHom compose(const FgHom &g, const FgHom &f) {
  require_shape(f);
  require_shape(g);
  if (!(f.target == g.source))
    throw Error(ErrorKind::DimensionMismatch, "compose: f.target != g.source");
  return {f.source, g.target, g.matrix * f.matrix};
}

bool is_surjective(const FgHom &h) {
  require_shape(h);
  const std::size_t t = h.target.generators();
  if (t == 0) return true;
  SnfResult f = snf(hcat(h.matrix, h.target.relations()));
  if (diagonal_rank(f.S) < t) return false;
  for (std::size_t i = 0; i < t; ++i)
    if (f.S(i, i) != 1) return false;
  return true;
}

IntMatrix kernel_lattice(const FgHom &h) {
  require_shape(h);
  const std::size_t s = h.source.generators();
  IntMatrix k = integer_kernel(hcat(h.matrix, h.target.relations()));
  return hermite_basis(k.row_range(0, s));
}

FgPresentation kernel_pres(const FgHom &h) {
  require_well_defined(h);
  IntMatrix basis = kernel_lattice(h);
  const IntMatrix &rel = h.source.relations();
  IntMatrix coords(basis.cols(), rel.cols());
  const SnfResult f = snf(basis);
  for (std::size_t j = 0; j < rel.cols(); ++j) {
    auto z = solve_snf(f, basis.cols(), rel.col(j));
    if (!z) throw Error(ErrorKind::Internal, "source relation outside kernel");
    for (std::size_t i = 0; i < basis.cols(); ++i) coords(i, j) = (*z)[i];
  }
  return FgPresentation(basis.cols(), std::move(coords));
}

// rank ker h = rank A - rank im h, and im h = Z^s / kernel_lattice(h).
std::size_t kernel_rank(const FgHom &h) {
  require_well_defined(h);
  const std::size_t image_rank = h.source.generators() - rank_q(kernel_lattice(h));
  return h.source.free_rank() - image_rank;
}

FgPresentation image_pres(const FgHom &h) {
  require_well_defined(h);
  return FgPresentation(h.source.generators(), kernel_lattice(h));
}

} // namespace quasitame
