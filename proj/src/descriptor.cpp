#include "quasitame/descriptor.hpp"

#include "quasitame/error.hpp"
#include "quasitame/primes.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

namespace quasitame {

namespace {

constexpr std::uint64_t kMaxPatternPeriod = 4096;
constexpr std::uint64_t kMaxMaterialize = 1u << 20;

void require_prime(std::uint64_t p) {
  if (!primes::is_prime(p))
    throw Error(ErrorKind::InvalidOrder, std::to_string(p) + " is not prime");
}

std::size_t minimal_period(const std::vector<Mult> &pattern) {
  const std::size_t q = pattern.size();
  for (std::size_t d = 1; d < q; ++d) {
    if (q % d) continue;
    bool ok = true;
    for (std::size_t i = d; i < q && ok; ++i) ok = pattern[i] == pattern[i % d];
    if (ok) return d;
  }
  return q;
}

bool all_zero(const std::vector<Mult> &pattern) {
  return std::all_of(pattern.begin(), pattern.end(),
                     [](Mult m) { return m.is_zero(); });
}

std::string cyclic_text(std::uint64_t p, std::uint64_t k) {
  BigInt v = pow_u64(p, k);
  if (v <= big(primes::kFactorBound)) return "C(" + v.get_str() + ")";
  return "C(" + std::to_string(p) + "^" + std::to_string(k) + ")";
}

std::string term_text(const std::string &atom, Mult m) {
  if (m == Mult(1)) return atom;
  return atom + "^" + m.str();
}

} // namespace

Atom Atom::cyclic(std::uint64_t p, std::uint64_t k) {
  require_prime(p);
  if (k == 0) throw Error(ErrorKind::InvalidOrder, "cyclic exponent must be >= 1");
  return {AtomKind::Cyclic, p, k};
}

Atom Atom::prufer(std::uint64_t p) {
  require_prime(p);
  return {AtomKind::Prufer, p, 0};
}

std::string Atom::str() const {
  switch (kind) {
  case AtomKind::FreeInt: return "Z";
  case AtomKind::Rationals: return "Q";
  case AtomKind::Cyclic: return cyclic_text(p, k);
  case AtomKind::Prufer: return "C(" + std::to_string(p) + "^inf)";
  }
  return "?";
}

GroupDescriptor GroupDescriptor::of(Atom atom, Mult mult) {
  GroupDescriptor g;
  g.add(atom, mult);
  return g;
}

GroupDescriptor GroupDescriptor::tower(std::uint64_t p, std::uint64_t start,
                                       std::uint64_t step, Mult mult) {
  if (step == 0 || step > kMaxPatternPeriod)
    throw Error(ErrorKind::InvalidOrder, "tower step must be in [1, 4096]");
  Tower t{start, std::vector<Mult>(step, Mult(0))};
  t.pattern[0] = mult;
  return with_tower(p, std::move(t));
}

GroupDescriptor GroupDescriptor::with_tower(std::uint64_t p, Tower tower) {
  GroupDescriptor g;
  g.add_tower(p, tower);
  return g;
}

Mult GroupDescriptor::mult(const Atom &atom) const {
  if (atom.kind == AtomKind::Cyclic) {
    auto t = towers_.find(atom.p);
    if (t != towers_.end() && atom.k >= t->second.start)
      return t->second.at(atom.k);
  }
  auto it = atoms_.find(atom);
  return it == atoms_.end() ? Mult(0) : it->second;
}

std::set<std::uint64_t> GroupDescriptor::primes() const {
  std::set<std::uint64_t> out;
  for (const auto &[a, m] : atoms_)
    if (a.kind == AtomKind::Cyclic || a.kind == AtomKind::Prufer) out.insert(a.p);
  for (const auto &[p, t] : towers_) out.insert(p);
  return out;
}

void GroupDescriptor::materialize(std::uint64_t p, std::uint64_t new_start) {
  auto it = towers_.find(p);
  if (it == towers_.end()) return;
  Tower &t = it->second;
  if (new_start <= t.start) return;
  if (new_start - t.start > kMaxMaterialize)
    throw Error(ErrorKind::TooLarge, "tower expansion too long");
  for (std::uint64_t k = t.start; k < new_start; ++k) {
    Mult m = t.at(k);
    if (!m.is_zero()) atoms_[Atom{AtomKind::Cyclic, p, k}] += m;
  }
  const std::size_t q = t.pattern.size();
  std::rotate(t.pattern.begin(),
              t.pattern.begin() + static_cast<std::ptrdiff_t>((new_start - t.start) % q),
              t.pattern.end());
  t.start = new_start;
}

void GroupDescriptor::normalize(std::uint64_t p) {
  auto it = towers_.find(p);
  if (it == towers_.end()) return;
  Tower &t = it->second;
  t.pattern.resize(minimal_period(t.pattern));
  if (all_zero(t.pattern)) {
    towers_.erase(it);
    return;
  }
  while (t.start > 1) {
    const Atom below{AtomKind::Cyclic, p, t.start - 1};
    auto a = atoms_.find(below);
    Mult prev = a == atoms_.end() ? Mult(0) : a->second;
    if (prev != t.pattern.back()) break;
    if (a != atoms_.end()) atoms_.erase(a);
    std::rotate(t.pattern.rbegin(), t.pattern.rbegin() + 1, t.pattern.rend());
    --t.start;
  }
}

void GroupDescriptor::add(const Atom &atom, Mult mult) {
  if (mult.is_zero()) return;
  if (atom.kind == AtomKind::Cyclic && towers_.count(atom.p)) {
    materialize(atom.p, atom.k + 1);
    atoms_[atom] += mult;
    normalize(atom.p);
    return;
  }
  atoms_[atom] += mult;
}

void GroupDescriptor::add_tower(std::uint64_t p, const Tower &incoming) {
  require_prime(p);
  if (incoming.pattern.empty() || incoming.start == 0)
    throw Error(ErrorKind::InvalidOrder, "malformed tower");
  if (incoming.pattern.size() > kMaxPatternPeriod)
    throw Error(ErrorKind::TooLarge, "tower period too long");
  if (all_zero(incoming.pattern)) return;

  std::uint64_t start = incoming.start;
  auto existing = towers_.find(p);
  if (existing != towers_.end()) start = std::max(start, existing->second.start);
  for (const auto &[a, m] : atoms_)
    if (a.kind == AtomKind::Cyclic && a.p == p) start = std::max(start, a.k + 1);

  materialize(p, start);
  GroupDescriptor scratch;
  scratch.towers_[p] = incoming;
  scratch.materialize(p, start);
  for (const auto &[a, m] : scratch.atoms_) atoms_[a] += m;
  const Tower &in = scratch.towers_[p];

  Tower merged{start, {}};
  if (existing == towers_.end()) {
    merged.pattern = in.pattern;
  } else {
    const Tower &cur = towers_[p];
    const std::size_t q = std::lcm(cur.pattern.size(), in.pattern.size());
    if (q > kMaxPatternPeriod) throw Error(ErrorKind::TooLarge, "tower period too long");
    merged.pattern.resize(q);
    for (std::size_t i = 0; i < q; ++i)
      merged.pattern[i] = cur.pattern[i % cur.pattern.size()] +
                          in.pattern[i % in.pattern.size()];
  }
  towers_[p] = std::move(merged);
  normalize(p);
}

void GroupDescriptor::add(const GroupDescriptor &other) {
  for (const auto &[a, m] : other.atoms_) add(a, m);
  for (const auto &[p, t] : other.towers_) add_tower(p, t);
}

std::string GroupDescriptor::str() const {
  std::vector<std::string> terms;
  for (const auto &[a, m] : atoms_)
    if (a.kind != AtomKind::Prufer) terms.push_back(term_text(a.str(), m));
  for (const auto &[p, t] : towers_) {
    const std::size_t q = t.pattern.size();
    for (std::size_t i = 0; i < q; ++i) {
      if (t.pattern[i].is_zero()) continue;
      std::ostringstream os;
      os << "tower(" << p << ", " << t.start + i;
      if (q > 1) os << ", " << q;
      os << ")";
      terms.push_back(term_text(os.str(), t.pattern[i]));
    }
  }
  for (const auto &[a, m] : atoms_)
    if (a.kind == AtomKind::Prufer) terms.push_back(term_text(a.str(), m));
  if (terms.empty()) return "0";
  std::string out = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) out += " + " + terms[i];
  return out;
}

GroupDescriptor canonicalize(const std::vector<RawSummand> &raw) {
  GroupDescriptor g;
  for (const auto &s : raw) {
    if (const auto *order = std::get_if<std::int64_t>(&s.what)) {
      if (*order < 1)
        throw Error(ErrorKind::InvalidOrder,
                    "cyclic order " + std::to_string(*order) + " < 1");
      for (auto [p, e] : primes::factorize(static_cast<std::uint64_t>(*order)))
        g.add(Atom::cyclic(p, e), s.mult);
    } else {
      const Atom &a = std::get<Atom>(s.what);
      if (a.kind == AtomKind::Cyclic) g.add(Atom::cyclic(a.p, a.k), s.mult);
      else if (a.kind == AtomKind::Prufer) g.add(Atom::prufer(a.p), s.mult);
      else g.add(a, s.mult);
    }
  }
  return g;
}

GroupDescriptor direct_sum(const GroupDescriptor &a, const GroupDescriptor &b) {
  GroupDescriptor out = a;
  out.add(b);
  return out;
}

bool is_torsion(const GroupDescriptor &g) {
  return std::none_of(g.atoms().begin(), g.atoms().end(),
                      [](const auto &e) { return e.first.is_torsion_free(); });
}

bool is_finite(const GroupDescriptor &g) {
  if (!g.towers().empty()) return false;
  return std::all_of(g.atoms().begin(), g.atoms().end(), [](const auto &e) {
    return e.first.kind == AtomKind::Cyclic && e.second.is_finite();
  });
}

std::optional<BigInt> exponent(const GroupDescriptor &g) {
  if (!g.towers().empty()) return std::nullopt;
  BigInt e = 1;
  for (const auto &[a, m] : g.atoms()) {
    if (a.kind != AtomKind::Cyclic) return std::nullopt;
    BigInt pk = pow_u64(a.p, a.k);
    mpz_lcm(e.get_mpz_t(), e.get_mpz_t(), pk.get_mpz_t());
  }
  return e;
}

std::optional<BigInt> order(const GroupDescriptor &g) {
  if (!is_finite(g)) return std::nullopt;
  BigInt n = 1;
  for (const auto &[a, m] : g.atoms()) n *= pow_u64(a.p, a.k * m.value());
  return n;
}

CardinalCount rank(const GroupDescriptor &g) {
  CardinalCount r = 0;
  for (const auto &[a, m] : g.atoms()) r += m;
  if (!g.towers().empty()) r += Mult::omega();
  return r;
}

GroupDescriptor p_primary(const GroupDescriptor &g, std::uint64_t p) {
  GroupDescriptor out;
  for (const auto &[a, m] : g.atoms())
    if ((a.kind == AtomKind::Cyclic || a.kind == AtomKind::Prufer) && a.p == p)
      out.add(a, m);
  auto t = g.towers().find(p);
  if (t != g.towers().end()) out.add_tower(p, t->second);
  return out;
}

bool is_p_group(const GroupDescriptor &g, std::uint64_t p) {
  for (const auto &[a, m] : g.atoms())
    if (a.is_torsion_free() || a.p != p) return false;
  for (const auto &[q, t] : g.towers())
    if (q != p) return false;
  return true;
}

namespace {
void require_p_group(const GroupDescriptor &g, std::uint64_t p) {
  if (!is_p_group(g, p))
    throw Error(ErrorKind::NotAPGroup, g.str() + " is not a " +
                                           std::to_string(p) + "-group");
}
} // namespace

CardinalCount rank_of_multiple(const GroupDescriptor &g, std::uint64_t p,
                               std::uint64_t n) {
  require_p_group(g, p);
  CardinalCount r = 0;
  for (const auto &[a, m] : g.atoms())
    if (a.kind == AtomKind::Prufer || a.k > n) r += m;
  if (!g.towers().empty()) r += Mult::omega();
  return r;
}

GroupDescriptor p_multiple(const GroupDescriptor &g, std::uint64_t p,
                           std::uint64_t n) {
  require_p_group(g, p);
  GroupDescriptor out;
  for (const auto &[a, m] : g.atoms()) {
    if (a.kind == AtomKind::Prufer) out.add(a, m);
    else if (a.k > n) out.add(Atom{AtomKind::Cyclic, p, a.k - n}, m);
  }
  auto it = g.towers().find(p);
  if (it != g.towers().end()) {
    const Tower &t = it->second;
    Tower shifted{t.start > n ? t.start - n : 1, {}};
    for (std::size_t i = 0; i < t.pattern.size(); ++i)
      shifted.pattern.push_back(t.at(shifted.start + n + i));
    out.add_tower(p, shifted);
  }
  return out;
}

CardinalCount final_rank(const GroupDescriptor &g, std::uint64_t p) {
  require_p_group(g, p);
  CardinalCount r = g.mult(Atom{AtomKind::Prufer, p, 0});
  if (!g.towers().empty()) r += Mult::omega();
  return r;
}

DivisibleSplit split_divisible(const GroupDescriptor &g) {
  DivisibleSplit s;
  for (const auto &[a, m] : g.atoms())
    (a.is_divisible() ? s.divisible : s.reduced).add(a, m);
  for (const auto &[p, t] : g.towers()) s.reduced.add_tower(p, t);
  return s;
}

bool is_divisible(const GroupDescriptor &g) {
  return g.towers().empty() &&
         std::all_of(g.atoms().begin(), g.atoms().end(),
                     [](const auto &e) { return e.first.is_divisible(); });
}

bool is_reduced(const GroupDescriptor &g) {
  return std::none_of(g.atoms().begin(), g.atoms().end(),
                      [](const auto &e) { return e.first.is_divisible(); });
}

bool is_dsc(const GroupDescriptor &g) {
  return std::all_of(g.atoms().begin(), g.atoms().end(), [](const auto &e) {
    return e.first.kind == AtomKind::Cyclic;
  });
}

bool iso_eq(const GroupDescriptor &a, const GroupDescriptor &b) { return a == b; }

std::uint64_t QuotientWitnessSpec::support_exponent(std::uint64_t index) const {
  std::vector<std::uint64_t> offsets;
  for (std::size_t i = 0; i < support.pattern.size(); ++i)
    if (!support.pattern[i].is_zero()) offsets.push_back(i);
  const std::uint64_t c = offsets.size();
  return support.start + (index / c) * support.pattern.size() + offsets[index % c];
}

std::uint64_t QuotientWitnessSpec::class_of(std::uint64_t index) const {
  if (pieces.is_omega()) return static_cast<std::uint64_t>(std::countr_zero(index + 1));
  return index % pieces.value();
}

std::vector<std::uint64_t>
QuotientWitnessSpec::class_exponents(std::uint64_t j, std::size_t count) const {
  std::vector<std::uint64_t> out;
  std::uint64_t first = 0, stride = 0;
  if (pieces.is_omega()) {
    if (j >= 40) throw Error(ErrorKind::TooLarge, "class index too large");
    first = (std::uint64_t{1} << j) - 1;
    stride = std::uint64_t{1} << (j + 1);
  } else {
    first = j;
    stride = pieces.value();
  }
  for (std::size_t t = 0; t < count; ++t) out.push_back(support_exponent(first + t * stride));
  return out;
}

std::string QuotientWitnessSpec::rule() const {
  return pieces.is_omega() ? "v2(i+1)" : "i mod " + pieces.str();
}

QuotientWitnessSpec prufer_quotient_witness(const GroupDescriptor &g,
                                            std::uint64_t p, Mult pieces) {
  if (!is_p_group(g, p) || !is_reduced(g) || !final_rank(g, p).is_omega())
    throw Error(ErrorKind::FinalRankFinite,
                g.str() + " is not a reduced " + std::to_string(p) +
                    "-group of infinite final rank");
  if (pieces.is_zero()) throw Error(ErrorKind::InvalidOrder, "pieces must be positive");
  return {p, g.towers().at(p), pieces};
}

bool check_quotient_witness(const QuotientWitnessSpec &spec,
                            const GroupDescriptor &g) {
  if (spec.pieces.is_zero() || !primes::is_prime(spec.p)) return false;
  if (!is_p_group(g, spec.p) || !is_reduced(g)) return false;
  auto it = g.towers().find(spec.p);
  if (it == g.towers().end() || !(it->second == spec.support)) return false;
  const std::uint64_t classes =
      spec.pieces.is_omega() ? 8 : std::min<std::uint64_t>(spec.pieces.value(), 8);
  for (std::uint64_t j = 0; j < classes; ++j) {
    auto ex = spec.class_exponents(j, 4);
    for (std::size_t i = 1; i < ex.size(); ++i)
      if (ex[i] <= ex[i - 1]) return false;
    for (auto k : ex)
      if (g.mult(Atom{AtomKind::Cyclic, spec.p, k}).is_zero()) return false;
  }
  // Partition: the first support indices land in exactly one class each.
  for (std::uint64_t i = 0; i < 64; ++i) {
    const std::uint64_t j = spec.class_of(i);
    if (spec.pieces.is_finite() && j >= spec.pieces.value()) return false;
  }
  return true;
}

} // namespace quasitame
