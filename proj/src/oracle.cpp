#include "quasitame/oracle.hpp"

#include "quasitame/error.hpp"
#include "quasitame/primes.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace quasitame::oracle {

namespace {

std::uint64_t exact_log(std::uint64_t count, std::uint64_t p) {
  std::uint64_t e = 0;
  while (count > 1) {
    if (count % p) throw Error(ErrorKind::Internal, "count is not a power of p");
    count /= p;
    ++e;
  }
  return e;
}

std::vector<std::uint32_t> all_elements(const std::vector<std::uint64_t> &moduli) {
  std::uint64_t n = 1;
  for (auto m : moduli) n *= m;
  std::vector<std::uint32_t> out(n);
  std::iota(out.begin(), out.end(), 0u);
  return out;
}

std::uint64_t count_killed_by(const FiniteGroupTable &t, std::uint64_t c) {
  std::uint64_t count = 0;
  for (auto x : t.elements()) count += t.scale(c, x) == 0;
  return count;
}

} // namespace

FiniteGroupTable::FiniteGroupTable(std::vector<std::uint64_t> moduli,
                                   std::vector<std::uint32_t> elements)
    : moduli_(std::move(moduli)), elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

std::vector<std::uint64_t> FiniteGroupTable::residues(std::uint32_t element) const {
  std::vector<std::uint64_t> r(moduli_.size());
  for (std::size_t i = moduli_.size(); i-- > 0;) {
    r[i] = element % moduli_[i];
    element /= static_cast<std::uint32_t>(moduli_[i]);
  }
  return r;
}

std::uint32_t FiniteGroupTable::pack(const std::vector<std::uint64_t> &r) const {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < moduli_.size(); ++i) v = v * moduli_[i] + r[i] % moduli_[i];
  return static_cast<std::uint32_t>(v);
}

std::uint32_t FiniteGroupTable::add(std::uint32_t a, std::uint32_t b) const {
  auto ra = residues(a), rb = residues(b);
  for (std::size_t i = 0; i < ra.size(); ++i) ra[i] += rb[i];
  return pack(ra);
}

std::uint32_t FiniteGroupTable::scale(std::uint64_t c, std::uint32_t a) const {
  auto r = residues(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = (c % moduli_[i]) * r[i];
  return pack(r);
}

std::uint64_t FiniteGroupTable::element_order(std::uint32_t a) const {
  // Order of (r_i) is lcm of m_i / gcd(r_i, m_i).
  auto r = residues(a);
  std::uint64_t k = 1;
  for (std::size_t i = 0; i < r.size(); ++i)
    k = std::lcm(k, moduli_[i] / std::gcd(r[i], moduli_[i]));
  return k;
}

bool FiniteGroupTable::contains(std::uint32_t a) const {
  return std::binary_search(elements_.begin(), elements_.end(), a);
}

FiniteGroupTable FiniteGroupTable::subset(std::vector<std::uint32_t> elements) const {
  return FiniteGroupTable(moduli_, std::move(elements));
}

std::vector<std::uint64_t> FiniteGroupTable::primes() const {
  std::set<std::uint64_t> ps;
  for (auto m : moduli_)
    for (auto [p, e] : primes::factorize(m)) ps.insert(p);
  return {ps.begin(), ps.end()};
}

FiniteGroupTable realize(const GroupDescriptor &g) {
  if (!g.towers().empty()) throw Error(ErrorKind::NotFinite, g.str());
  std::vector<std::uint64_t> moduli;
  std::uint64_t order = 1;
  for (const auto &[a, m] : g.atoms()) {
    if (a.kind != AtomKind::Cyclic || m.is_omega())
      throw Error(ErrorKind::NotFinite, g.str());
    for (std::uint64_t i = 0; i < m.value(); ++i) {
      BigInt pk = pow_u64(a.p, a.k);
      if (pk > big(kMaxOrder) || order * to_u64(pk) > kMaxOrder)
        throw Error(ErrorKind::TooLarge, g.str() + " has more than 4096 elements");
      moduli.push_back(to_u64(pk));
      order *= to_u64(pk);
    }
  }
  return FiniteGroupTable(moduli, all_elements(moduli));
}

std::uint64_t brute_rank(const FiniteGroupTable &t) {
  std::uint64_t r = 0;
  for (auto p : t.primes()) r += exact_log(count_killed_by(t, p), p);
  return r;
}

namespace {

FiniteGroupTable multiple(const FiniteGroupTable &t, std::uint64_t c) {
  std::vector<std::uint32_t> out;
  for (auto x : t.elements()) out.push_back(t.scale(c, x));
  return t.subset(std::move(out));
}

} // namespace

std::uint64_t brute_rank_of_multiple(const FiniteGroupTable &t, std::uint64_t p,
                                     std::uint64_t n) {
  FiniteGroupTable a = t;
  for (std::uint64_t i = 0; i < n; ++i) a = multiple(a, p);
  return exact_log(count_killed_by(a, p), p);
}

std::uint64_t brute_final_rank(const FiniteGroupTable &t, std::uint64_t p) {
  FiniteGroupTable a = t;
  std::uint64_t best = exact_log(count_killed_by(a, p), p);
  while (true) {
    FiniteGroupTable next = multiple(a, p);
    best = std::min(best, exact_log(count_killed_by(next, p), p));
    if (next.elements() == a.elements()) return best;
    a = std::move(next);
  }
}

FiniteGroupTable brute_p_primary(const FiniteGroupTable &t, std::uint64_t p) {
  std::vector<std::uint32_t> out;
  for (auto x : t.elements()) {
    std::uint64_t o = t.element_order(x);
    while (o % p == 0) o /= p;
    if (o == 1) out.push_back(x);
  }
  return t.subset(std::move(out));
}

std::uint64_t brute_exponent(const FiniteGroupTable &t) {
  std::uint64_t e = 1;
  for (auto x : t.elements()) e = std::lcm(e, t.element_order(x));
  return e;
}

FiniteGroupTable brute_divisible_part(const FiniteGroupTable &t) {
  // D <- D ∩ pD for every prime p, until stable.
  FiniteGroupTable d = t;
  const auto ps = t.primes();
  while (true) {
    std::vector<std::uint32_t> next;
    std::vector<FiniteGroupTable> images;
    for (auto p : ps) images.push_back(multiple(d, p));
    for (auto x : d.elements())
      if (std::all_of(images.begin(), images.end(),
                      [x](const FiniteGroupTable &im) { return im.contains(x); }))
        next.push_back(x);
    if (next.size() == d.order()) return d;
    d = t.subset(std::move(next));
  }
}

GroupDescriptor recover_descriptor(const FiniteGroupTable &t) {
  GroupDescriptor g;
  for (auto p : t.primes()) {
    // c[j] = log_p |A[p^j]|, non-decreasing until it stabilizes.
    std::vector<std::uint64_t> c{0};
    std::uint64_t pj = 1;
    while (true) {
      pj *= p;
      c.push_back(exact_log(count_killed_by(t, pj), p));
      if (c.back() == c[c.size() - 2]) break;
    }
    for (std::size_t k = 1; k + 1 < c.size(); ++k) {
      const std::uint64_t ge_k = c[k] - c[k - 1];
      const std::uint64_t ge_k1 = c[k + 1] - c[k];
      if (ge_k > ge_k1) g.add(Atom::cyclic(p, k), ge_k - ge_k1);
    }
  }
  return g;
}

namespace {

void partitions(std::uint64_t n, std::uint64_t max_part, std::vector<std::uint64_t> &cur,
                std::vector<std::vector<std::uint64_t>> &out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (std::uint64_t part = std::min(n, max_part); part >= 1; --part) {
    cur.push_back(part);
    partitions(n - part, part, cur, out);
    cur.pop_back();
  }
}

} // namespace

std::vector<GroupDescriptor> finite_groups_up_to(std::uint64_t max_order) {
  std::vector<GroupDescriptor> out;
  for (std::uint64_t n = 1; n <= max_order; ++n) {
    std::vector<GroupDescriptor> groups{GroupDescriptor{}};
    for (auto [p, e] : primes::factorize(n)) {
      std::vector<std::vector<std::uint64_t>> parts;
      std::vector<std::uint64_t> cur;
      partitions(e, e, cur, parts);
      std::vector<GroupDescriptor> next;
      for (const auto &g : groups)
        for (const auto &part : parts) {
          GroupDescriptor h = g;
          for (auto k : part) h.add(Atom::cyclic(p, k), 1);
          next.push_back(std::move(h));
        }
      groups = std::move(next);
    }
    std::sort(groups.begin(), groups.end(),
              [](const GroupDescriptor &a, const GroupDescriptor &b) {
                return a.atoms() < b.atoms();
              });
    for (auto &g : groups) out.push_back(std::move(g));
  }
  return out;
}

SweepSummary sweep(std::uint64_t max_order) {
  if (max_order > kMaxOrder)
    throw Error(ErrorKind::TooLarge, "--max-order above 4096");
  SweepSummary s;
  s.max_order = max_order;
  auto compare = [&](const GroupDescriptor &g, const std::string &column,
                     const std::string &symbolic, const std::string &enumerated) {
    ++s.comparisons;
    if (symbolic != enumerated) s.mismatches.push_back({g.str(), column, symbolic, enumerated});
  };
  for (const auto &g : finite_groups_up_to(max_order)) {
    ++s.groups;
    const FiniteGroupTable t = realize(g);
    compare(g, "rank", rank(g).str(), std::to_string(brute_rank(t)));
    auto e = exponent(g);
    compare(g, "exponent", e ? e->get_str() : "unbounded",
            std::to_string(brute_exponent(t)));
    const bool no_divisible = split_divisible(g).divisible.is_trivial();
    compare(g, "divisible_part", no_divisible ? "trivial" : "nontrivial",
            brute_divisible_part(t).order() == 1 ? "trivial" : "nontrivial");

    std::set<std::uint64_t> ps{2, 3, 5, 7};
    for (auto p : t.primes()) ps.insert(p);
    for (auto p : ps) {
      const GroupDescriptor part = p_primary(g, p);
      const FiniteGroupTable bt = brute_p_primary(t, p);
      compare(g, "p_primary(" + std::to_string(p) + ")", part.str(),
              recover_descriptor(bt).str());
      compare(g, "final_rank(" + std::to_string(p) + ")", final_rank(part, p).str(),
              std::to_string(brute_final_rank(bt, p)));
      std::uint64_t top = 0;
      for (const auto &[a, m] : part.atoms()) top = std::max(top, a.k);
      for (std::uint64_t n = 0; n <= top + 1; ++n)
        compare(g, "r(" + std::to_string(p) + "^" + std::to_string(n) + "A)",
                rank_of_multiple(part, p, n).str(),
                std::to_string(brute_rank_of_multiple(bt, p, n)));
    }
  }
  return s;
}

} // namespace quasitame::oracle
