#include "quasitame/product.hpp"

#include "quasitame/error.hpp"
#include "quasitame/primes.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace quasitame {

namespace {

std::string with_mult(const std::string &t, Mult m) {
  return m == Mult(1) ? t : t + "^" + m.str();
}

template <class T> std::string join(const std::vector<T> &xs, const std::string &sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? sep : "") << xs[i];
  return os.str();
}

bool good_p_part(const GroupDescriptor &pp) {
  if (!pp.towers().empty()) return false;
  return std::none_of(pp.atoms().begin(), pp.atoms().end(),
                      [](const auto &am) { return am.second.is_omega(); });
}

GroupDescriptor omega_cyclic_part(const GroupDescriptor &pp) {
  GroupDescriptor b;
  for (const auto &[a, m] : pp.atoms())
    if (a.kind == AtomKind::Cyclic && m.is_omega()) b.add(a, m);
  return b;
}

std::uint64_t checked_add(std::uint64_t x, std::uint64_t y) {
  std::uint64_t r;
  if (__builtin_add_overflow(x, y, &r)) throw Error(ErrorKind::TooLarge, "index overflow");
  return r;
}

} // namespace

// ---------------------------------------------------------------------------
// Templates

std::uint64_t Affine::eval(std::uint64_t n) const {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, n, &r)) throw Error(ErrorKind::TooLarge, "affine overflow");
  return checked_add(r, b);
}

std::string Affine::str() const {
  if (a == 0) return std::to_string(b);
  std::string s = a == 1 ? "n" : std::to_string(a) + "*n";
  if (b) s += "+" + std::to_string(b);
  return s;
}

std::uint64_t PrimeRef::eval(std::uint64_t n) const {
  return at ? primes::nth_prime(index.eval(n)) : p;
}

std::string PrimeRef::str() const {
  return at ? "p(" + index.str() + ")" : std::to_string(p);
}

GroupDescriptor ParamTerm::instantiate(std::uint64_t n) const {
  const std::uint64_t q = prime.eval(n);
  switch (kind) {
  case TermKind::Cyclic: return GroupDescriptor::of(Atom::cyclic(q, exp.eval(n)), mult);
  case TermKind::Prufer: return GroupDescriptor::of(Atom::prufer(q), mult);
  case TermKind::Tower: return GroupDescriptor::tower(q, exp.eval(n), step, mult);
  }
  throw Error(ErrorKind::Internal, "term kind");
}

std::string ParamTerm::str() const {
  std::string t;
  switch (kind) {
  case TermKind::Cyclic:
    t = "C(" + prime.str();
    if (!exp.is_constant()) t += "^(" + exp.str() + ")";
    else if (exp.b != 1) t += "^" + exp.str();
    t += ")";
    break;
  case TermKind::Prufer: t = "C(" + prime.str() + "^inf)"; break;
  case TermKind::Tower:
    t = "tower(" + prime.str() + ", " + exp.str();
    if (step != 1) t += ", " + std::to_string(step);
    t += ")";
    break;
  }
  return with_mult(t, mult);
}

EntryTemplate::EntryTemplate(GroupDescriptor base, std::vector<ParamTerm> terms)
    : base_(std::move(base)) {
  std::vector<ParamTerm> kept;
  for (auto t : terms) {
    if (t.mult.is_zero()) continue;
    if (t.prime.at) {
      if (t.prime.index.b < 1) throw Error(ErrorKind::InvalidOrder, "p(...) index must be >= 1 at n = 0");
      if (t.prime.index.is_constant()) t.prime = {false, primes::nth_prime(t.prime.index.b), {}};
    } else if (!primes::is_prime(t.prime.p)) {
      throw Error(ErrorKind::InvalidOrder, std::to_string(t.prime.p) + " is not prime");
    }
    if (t.kind == TermKind::Prufer) t.exp = {};
    else if (t.exp.b < 1) throw Error(ErrorKind::InvalidOrder, "exponent must be >= 1 at n = 0");
    if (t.kind != TermKind::Tower) t.step = 1;
    if (t.step < 1) throw Error(ErrorKind::InvalidOrder, "tower step must be >= 1");
    if (t.is_constant()) base_.add(t.instantiate(0));
    else kept.push_back(t);
  }
  std::sort(kept.begin(), kept.end(),
            [](const ParamTerm &x, const ParamTerm &y) { return x.key() < y.key(); });
  for (const auto &t : kept) {
    if (!terms_.empty() && terms_.back().key() == t.key()) terms_.back().mult += t.mult;
    else terms_.push_back(t);
  }
}

GroupDescriptor EntryTemplate::instantiate(std::uint64_t n) const {
  GroupDescriptor g = base_;
  for (const auto &t : terms_) g.add(t.instantiate(n));
  return g;
}

EntryTemplate EntryTemplate::fixed_p_part(std::uint64_t p) const {
  std::vector<ParamTerm> ts;
  for (const auto &t : terms_)
    if (!t.prime.at && t.prime.p == p) ts.push_back(t);
  return EntryTemplate(p_primary(base_, p), std::move(ts));
}

std::set<std::uint64_t> EntryTemplate::fixed_primes() const {
  auto ps = base_.primes();
  for (const auto &t : terms_)
    if (!t.prime.at) ps.insert(t.prime.p);
  return ps;
}

std::string EntryTemplate::str() const {
  std::vector<std::string> parts;
  if (!base_.is_trivial()) parts.push_back(base_.str());
  for (const auto &t : terms_) parts.push_back(t.str());
  return parts.empty() ? "0" : join(parts, " + ");
}

std::string SequenceSpec::str() const {
  std::string s = "prod n: ";
  if (!prefix.empty()) {
    std::vector<std::string> ps;
    for (const auto &d : prefix) ps.push_back(d.str());
    s += "[" + join(ps, ", ") + "] ";
  }
  std::vector<std::string> ts;
  for (const auto &t : tail) ts.push_back(t.str());
  return s + join(ts, "; ");
}

GroupDescriptor seq_nth(const SequenceSpec &spec, std::uint64_t n) {
  if (spec.tail.empty()) throw Error(ErrorKind::Internal, "empty tail");
  if (n < spec.prefix.size()) return spec.prefix[n];
  return spec.tail[spec.position(n)].instantiate(n);
}

// ---------------------------------------------------------------------------
// Eventual behaviour

bool holds_at(const GroupDescriptor &g, Predicate pred) {
  switch (pred.kind) {
  case PredKind::Torsion: return is_torsion(g);
  case PredKind::Finite: return is_finite(g);
  case PredKind::Bounded: return exponent(g).has_value();
  case PredKind::PSylowGood: return good_p_part(p_primary(g, pred.p));
  case PredKind::PPartTrivial: return p_primary(g, pred.p).is_trivial();
  case PredKind::NonTorsionInfinitelyOften: return !is_torsion(g);
  }
  return false;
}

namespace {

bool sylow_bad_term(const ParamTerm &t) {
  return t.mult.is_omega() || t.kind == TermKind::Tower;
}

// Fails at every index of the position, PrimeAt hits aside.
bool fails_always(const EntryTemplate &t, Predicate pred) {
  const auto &ts = t.terms();
  switch (pred.kind) {
  case PredKind::Torsion:
  case PredKind::NonTorsionInfinitelyOften: return !t.is_torsion();
  case PredKind::Finite:
    return !is_finite(t.base()) || std::any_of(ts.begin(), ts.end(), [](const ParamTerm &x) {
             return x.mult.is_omega() || x.kind != TermKind::Cyclic;
           });
  case PredKind::Bounded:
    return !exponent(t.base()) || std::any_of(ts.begin(), ts.end(), [](const ParamTerm &x) {
             return x.kind != TermKind::Cyclic;
           });
  case PredKind::PSylowGood: {
    const auto part = t.fixed_p_part(pred.p);
    return !good_p_part(part.base()) ||
           std::any_of(part.terms().begin(), part.terms().end(), sylow_bad_term);
  }
  case PredKind::PPartTrivial: {
    const auto part = t.fixed_p_part(pred.p);
    return !part.base().is_trivial() || !part.terms().empty();
  }
  }
  return false;
}

std::vector<std::uint64_t> hits_where(const SequenceSpec &spec, std::size_t j, std::uint64_t p,
                                      bool bad_only) {
  std::vector<std::uint64_t> out;
  const std::uint64_t L = spec.prefix_length(), q = spec.period();
  std::uint64_t idx = 0;
  for (const auto &t : spec.tail[j].terms()) {
    if (!t.prime.at || (bad_only && !sylow_bad_term(t))) continue;
    if (!idx) idx = primes::prime_index(p);
    const auto [a, b] = t.prime.index;
    if (idx < b || (idx - b) % a) continue;
    const std::uint64_t n = (idx - b) / a;
    if (n >= L && (n - L) % q == j) out.push_back(n);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::uint64_t last_hit_bound(const SequenceSpec &spec, std::uint64_t p, bool bad_only) {
  std::uint64_t n0 = 0;
  for (std::size_t j = 0; j < spec.tail.size(); ++j)
    for (auto n : hits_where(spec, j, p, bad_only)) n0 = std::max(n0, n + 1);
  return n0;
}

} // namespace

std::vector<std::uint64_t> prime_hits(const SequenceSpec &spec, std::size_t position,
                                      std::uint64_t p, bool bad_terms_only) {
  return hits_where(spec, position, p, bad_terms_only);
}

Eventually eventually(const SequenceSpec &spec, Predicate pred) {
  if (pred.kind == PredKind::NonTorsionInfinitelyOften) {
    const bool io = std::any_of(spec.tail.begin(), spec.tail.end(),
                                [](const EntryTemplate &t) { return !t.is_torsion(); });
    if (!io) return {false, std::nullopt};
    return {true, spec.prefix_length()};
  }
  std::uint64_t N = 0;
  for (std::size_t i = 0; i < spec.prefix.size(); ++i)
    if (!holds_at(spec.prefix[i], pred)) N = i + 1;
  for (const auto &t : spec.tail)
    if (fails_always(t, pred)) return {false, std::nullopt};
  if (pred.kind == PredKind::PSylowGood || pred.kind == PredKind::PPartTrivial)
    N = std::max(N, last_hit_bound(spec, pred.p, pred.kind == PredKind::PSylowGood));
  return {true, N};
}

// ---------------------------------------------------------------------------
// Payload helpers

const char *to_string(SylowKind k) {
  switch (k) {
  case SylowKind::BoundedDsc: return "BoundedDsc";
  case SylowKind::DivisibleQuotient: return "DivisibleQuotient";
  case SylowKind::DivisibleSummand: return "DivisibleSummand";
  }
  return "?";
}

std::optional<SylowKind> parse_sylow_kind(const std::string &s) {
  for (auto k : {SylowKind::BoundedDsc, SylowKind::DivisibleQuotient, SylowKind::DivisibleSummand})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

std::string kernel_tag(SylowKind k, std::uint64_t p) {
  const std::string ps = std::to_string(p);
  switch (k) {
  case SylowKind::BoundedDsc:
    return "L = 0; K_n = B_n, an infinite bounded dsc direct summand of the " + ps + "-part";
  case SylowKind::DivisibleQuotient:
    return "L_n = kernel of the direct-limit map of the tower support onto Z(" + ps +
           "^inf)^omega";
  case SylowKind::DivisibleSummand:
    return "L = 0; K_n = Z(" + ps + "^inf)^omega, a divisible direct summand";
  }
  return "";
}

const char *to_string(Part p) {
  switch (p) {
  case Part::R: return "R";
  case Part::D: return "D";
  case Part::G: return "G";
  }
  return "?";
}

std::optional<Part> parse_part(const std::string &s) {
  for (auto p : {Part::R, Part::D, Part::G})
    if (s == to_string(p)) return p;
  return std::nullopt;
}

namespace {

std::vector<std::uint64_t> nontorsion_positions(const SequenceSpec &spec) {
  std::vector<std::uint64_t> out;
  for (std::size_t j = 0; j < spec.tail.size(); ++j)
    if (!spec.tail[j].is_torsion()) out.push_back(j);
  return out;
}

std::set<std::uint64_t> tail_fixed_primes(const SequenceSpec &spec) {
  std::set<std::uint64_t> ps;
  for (const auto &t : spec.tail) ps.merge(t.fixed_primes());
  return ps;
}

std::vector<std::uint64_t> bad_positions(const SequenceSpec &spec, std::uint64_t p) {
  std::vector<std::uint64_t> out;
  for (std::size_t j = 0; j < spec.tail.size(); ++j)
    if (fails_always(spec.tail[j], {PredKind::PSylowGood, p})) out.push_back(j);
  return out;
}

std::optional<std::uint64_t> first_bad_prime(const SequenceSpec &spec) {
  for (auto p : tail_fixed_primes(spec))
    if (!bad_positions(spec, p).empty()) return p;
  return std::nullopt;
}

std::string positions_text(const std::vector<std::uint64_t> &ps) {
  return "{" + join(ps, ", ") + "}";
}

SylowEntry sylow_entry(const EntryTemplate &t, std::uint64_t j, std::uint64_t p) {
  const EntryTemplate part = t.fixed_p_part(p);
  SylowEntry e;
  e.position = j;
  const GroupDescriptor &b = part.base();
  if (b.mult(Atom::prufer(p)).is_omega()) {
    e.kind = SylowKind::DivisibleSummand;
    e.group = EntryTemplate(GroupDescriptor::of(Atom::prufer(p), Mult::omega()));
  } else if (!b.towers().empty() ||
             std::any_of(part.terms().begin(), part.terms().end(),
                         [](const ParamTerm &x) { return x.kind == TermKind::Tower; })) {
    e.kind = SylowKind::DivisibleQuotient;
    GroupDescriptor support;
    if (b.towers().count(p)) support = GroupDescriptor::with_tower(p, b.towers().at(p));
    std::vector<ParamTerm> ts;
    for (const auto &x : part.terms())
      if (x.kind == TermKind::Tower) ts.push_back(x);
    e.group = EntryTemplate(support, ts);
  } else {
    e.kind = SylowKind::BoundedDsc;
    std::vector<ParamTerm> ts;
    for (const auto &x : part.terms())
      if (x.mult.is_omega()) ts.push_back(x);
    e.group = EntryTemplate(omega_cyclic_part(b), ts);
  }
  e.kernel_tag = kernel_tag(e.kind, p);
  return e;
}

std::uint64_t max_index_hit(const SequenceSpec &spec, std::uint64_t p) {
  return last_hit_bound(spec, p, false);
}

} // namespace

Witness witness_extract(const SequenceSpec &spec, int clause, std::optional<std::uint64_t> p,
                        Part part) {
  Witness w;
  w.part = part;
  w.indices.start = spec.prefix_length();
  w.indices.period = spec.period();
  if (clause == 1) {
    w.kind = WitnessKind::ZN;
    w.indices.positions = nontorsion_positions(spec);
    if (w.indices.positions.empty())
      throw Error(ErrorKind::WrongCase, "no non-torsion entries recur");
    for (auto j : w.indices.positions)
      w.atoms.push_back(spec.tail[j].base().mult(Atom::free_int()).is_zero() ? Atom::rationals()
                                                                             : Atom::free_int());
    return w;
  }
  if (clause != 2) throw Error(ErrorKind::WrongCase, "clause must be 1 or 2");
  if (!nontorsion_positions(spec).empty())
    throw Error(ErrorKind::WrongCase, "clause (1) applies");
  if (!p) p = first_bad_prime(spec);
  if (!p) throw Error(ErrorKind::WrongCase, "every Sylow part is eventually F + Z(p^inf)^k");
  w.kind = WitnessKind::SylowProduct;
  w.p = *p;
  w.indices.positions = bad_positions(spec, *p);
  if (w.indices.positions.empty())
    throw Error(ErrorKind::WrongCase, "the " + std::to_string(*p) + "-parts are eventually good");
  for (auto j : w.indices.positions) w.entries.push_back(sylow_entry(spec.tail[j], j, *p));
  return w;
}

TameCertificate tame_certificate(const SequenceSpec &spec) {
  if (!nontorsion_positions(spec).empty() || first_bad_prime(spec))
    throw Error(ErrorKind::WrongCase, "product is not tame");
  TameCertificate c;
  const std::uint64_t L = spec.prefix_length();
  for (std::size_t i = 0; i < spec.prefix.size(); ++i)
    if (!is_torsion(spec.prefix[i])) c.torsion_threshold = i + 1;
  for (auto p : tail_fixed_primes(spec)) {
    PrimeForm f;
    f.p = p;
    f.threshold = std::max(L, max_index_hit(spec, p));
    for (const auto &t : spec.tail) {
      const EntryTemplate part = t.fixed_p_part(p);
      f.k.push_back(part.base().mult(Atom::prufer(p)).value());
      f.F.push_back(EntryTemplate(split_divisible(part.base()).reduced, part.terms()));
    }
    c.primes.push_back(std::move(f));
  }
  std::set<FamilyTag> fams;
  for (std::size_t j = 0; j < spec.tail.size(); ++j)
    for (const auto &t : spec.tail[j].terms())
      if (t.prime.at) fams.insert({j, t.prime.index.a, t.prime.index.b});
  c.families.assign(fams.begin(), fams.end());
  return c;
}

// ---------------------------------------------------------------------------
// Classifiers

namespace {

std::string kinds_text(const Witness &w) {
  std::vector<std::string> ks;
  for (const auto &e : w.entries)
    ks.push_back("position " + std::to_string(e.position) + ": " + to_string(e.kind) + " " +
                 e.group.str());
  return join(ks, "; ");
}

std::string certificate_text(const TameCertificate &c) {
  std::string s = "torsion from n = " + std::to_string(c.torsion_threshold);
  for (const auto &f : c.primes) s += "; p = " + std::to_string(f.p) + " from n = " +
                                     std::to_string(f.threshold);
  if (!c.families.empty()) s += "; PrimeAt families are eventually trivial";
  return s;
}

} // namespace

Verdict solecki_check(const SequenceSpec &spec) {
  Verdict v;
  const auto nt = nontorsion_positions(spec);
  if (!nt.empty()) {
    v.trace.push_back({"torsion", "th:Sol2",
                       "G_n is non-torsion at tail positions " + positions_text(nt) +
                           ", hence for infinitely many n"});
    v.payload = witness_extract(spec, 1);
  } else if (auto p = first_bad_prime(spec)) {
    Witness w = witness_extract(spec, 2, p);
    v.trace.push_back({"sylow", "th:Sol2",
                       "the " + std::to_string(*p) + "-primary part of G_n is not of the form F + Z(" +
                           std::to_string(*p) + "^inf)^k at tail positions " +
                           positions_text(w.indices.positions)});
    v.payload = std::move(w);
  } else {
    TameCertificate c = tame_certificate(spec);
    v.tame = true;
    v.trace.push_back({"criterion", "th:Sol2",
                       "G_n torsion for all but finitely many n and every Sylow part eventually "
                       "F + Z(p^inf)^k: " + certificate_text(c)});
    v.payload = std::move(c);
  }
  v.relatively_tame = v.tame;
  v.trace.push_back({"relative", "th:DiGa",
                     v.tame ? "tame, hence relatively tame"
                            : "a product of discrete groups is relatively tame only if tame"});
  return v;
}

Decomposition decompose(const SequenceSpec &spec) {
  Decomposition d;
  for (const auto &g : spec.prefix) {
    auto s = split_divisible(g);
    d.R.prefix.push_back(std::move(s.reduced));
    d.D.prefix.push_back(std::move(s.divisible));
  }
  for (const auto &t : spec.tail) {
    auto s = split_divisible(t.base());
    std::vector<ParamTerm> r, dv;
    for (const auto &x : t.terms()) (x.kind == TermKind::Prufer ? dv : r).push_back(x);
    d.R.tail.emplace_back(std::move(s.reduced), std::move(r));
    d.D.tail.emplace_back(std::move(s.divisible), std::move(dv));
  }
  return d;
}

namespace {

void require_reduced(const SequenceSpec &spec) {
  for (std::size_t i = 0; i < spec.prefix.size(); ++i)
    if (!is_reduced(spec.prefix[i]))
      throw Error(ErrorKind::NotReduced, "entry " + std::to_string(i) + " has a divisible summand");
  for (std::size_t j = 0; j < spec.tail.size(); ++j) {
    const auto &t = spec.tail[j];
    if (!is_reduced(t.base()) ||
        std::any_of(t.terms().begin(), t.terms().end(),
                    [](const ParamTerm &x) { return x.kind == TermKind::Prufer; }))
      throw Error(ErrorKind::NotReduced,
                  "tail position " + std::to_string(j) + " has a divisible summand");
  }
}

} // namespace

Verdict reduced_classify(const SequenceSpec &spec) {
  require_reduced(spec);
  Verdict v;
  const auto nt = nontorsion_positions(spec);
  if (!nt.empty()) {
    v.trace.push_back({"clause-1", "th:Main:Red",
                       "clause (1): R_n is non-torsion at tail positions " + positions_text(nt) +
                           "; an element with infinite-order coordinates there generates an "
                           "infinite discrete subgroup inside every G<n>, so Z^N embeds"});
    v.payload = witness_extract(spec, 1, std::nullopt, Part::R);
  } else if (auto p = first_bad_prime(spec)) {
    Witness w = witness_extract(spec, 2, p, Part::R);
    const std::string ps = std::to_string(*p);
    v.trace.push_back({"clause-2", "th:Main:Red",
                       "clause (2): the Sylow " + ps + "-subgroup of H = prod R_n is not locally "
                       "compact; the " + ps + "-part of R_n is infinite at tail positions " +
                           positions_text(w.indices.positions)});
    v.trace.push_back({"witness", "co:Red", "K_n kinds: " + kinds_text(w)});
    const bool bounded = std::any_of(w.entries.begin(), w.entries.end(), [](const SylowEntry &e) {
      return e.kind == SylowKind::BoundedDsc;
    });
    const bool divisible = std::any_of(w.entries.begin(), w.entries.end(), [](const SylowEntry &e) {
      return e.kind == SylowKind::DivisibleQuotient;
    });
    if (bounded) v.trace.push_back({"bounded", "thProC", "the bounded K_n are bounded dsc groups"});
    if (divisible)
      v.trace.push_back({"divisible", "le:Red",
                         "unbounded towers map onto Z(" + ps + "^inf)^omega, divisible of infinite rank"});
    v.payload = std::move(w);
  } else {
    TameCertificate c = tame_certificate(spec);
    v.tame = true;
    v.trace.push_back({"clause-3", "th:Main:Red",
                       "clause (3): H = prod_{n >= N} R_n is open and quasi-torsion, and each Sylow "
                       "subgroup is a product of eventually finite groups, so locally compact; " +
                           certificate_text(c)});
    v.payload = std::move(c);
  }
  v.relatively_tame = v.tame;
  return v;
}

namespace {

TameCertificate assemble(const SequenceSpec &spec, const Decomposition &d) {
  const TameCertificate cr = tame_certificate(d.R), cd = tame_certificate(d.D);
  TameCertificate c;
  c.torsion_threshold = std::max(cr.torsion_threshold, cd.torsion_threshold);
  std::map<std::uint64_t, PrimeForm> forms;
  const std::uint64_t L = spec.prefix_length(), q = spec.period();
  auto slot = [&](std::uint64_t p) -> PrimeForm & {
    auto [it, fresh] = forms.try_emplace(p);
    if (fresh) {
      it->second.p = p;
      it->second.F.assign(q, EntryTemplate{});
      it->second.k.assign(q, 0);
      it->second.threshold =
          std::max({L, max_index_hit(d.R, p), max_index_hit(d.D, p)});
    }
    return it->second;
  };
  for (const auto &f : cr.primes) slot(f.p).F = f.F;
  for (const auto &f : cd.primes) slot(f.p).k = f.k;
  for (auto &[p, f] : forms) c.primes.push_back(std::move(f));
  std::set<FamilyTag> fams(cr.families.begin(), cr.families.end());
  fams.insert(cd.families.begin(), cd.families.end());
  c.families.assign(fams.begin(), fams.end());
  return c;
}

void append(std::vector<TraceStep> &out, const std::vector<TraceStep> &in, const std::string &pfx) {
  for (const auto &s : in) out.push_back({pfx + s.id, s.theorem, s.detail});
}

} // namespace

Verdict classify(const SequenceSpec &spec, ClassifyOptions opts) {
  const Decomposition d = decompose(spec);
  Verdict v;
  v.trace.push_back({"decompose", "le:Decom",
                     "G = R + prod D_n with R = " + d.R.str() + " and D = " + d.D.str()});
  Verdict rv = reduced_classify(d.R);
  Verdict dv = solecki_check(d.D);
  if (!dv.tame) std::get<Witness>(dv.payload).part = Part::D;
  append(v.trace, rv.trace, "reduced/");
  dv.trace.pop_back(); // the relative-tameness line is restated below
  append(v.trace, dv.trace, "divisible/");

  v.tame = rv.tame && dv.tame;
  v.relatively_tame = v.tame;
  if (!rv.tame) v.payload = rv.payload;
  else if (!dv.tame) v.payload = dv.payload;
  else {
    TameCertificate c = assemble(spec, d);
    if (c != tame_certificate(spec))
      throw Error(ErrorKind::Internal, "assembled certificate differs from the direct one");
    v.payload = std::move(c);
  }

  const Verdict direct = solecki_check(spec);
  if (direct.tame != v.tame)
    throw Error(ErrorKind::Internal, "decomposition pipeline disagrees with the direct criterion");
  v.trace.push_back({"criterion", "th:Sol2",
                     std::string("direct criterion on prod G_n agrees: ") +
                         (v.tame ? "tame" : "not tame")});
  v.trace.push_back({"verdict", "th:Main",
                     v.tame ? "R and prod D_n are both tame, so G is tame"
                            : std::string(rv.tame ? "prod D_n" : "R") +
                                  " is not tame, so G is not tame nor relatively tame"});
  v.trace.push_back({"relative", "th:DiGa",
                     v.tame ? "tame, hence relatively tame"
                            : "for products of discrete groups relative tameness equals tameness"});

  if (opts.explain) {
    const std::uint64_t shown = spec.prefix_length() + 2 * spec.period();
    for (std::uint64_t n = 0; n < shown; ++n)
      v.trace.push_back({"instance", "le:Decom",
                         "G_" + std::to_string(n) + " = " + seq_nth(spec, n).str() + "; R_" +
                             std::to_string(n) + " = " + seq_nth(d.R, n).str() + "; D_" +
                             std::to_string(n) + " = " + seq_nth(d.D, n).str()});
    if (const auto *c = std::get_if<TameCertificate>(&v.payload)) {
      for (const auto &f : c->primes)
        for (std::size_t j = 0; j < f.F.size(); ++j)
          v.trace.push_back({"form", "th:Sol2",
                             "p = " + std::to_string(f.p) + ", position " + std::to_string(j) +
                                 ", n >= " + std::to_string(f.threshold) + ": " + f.F[j].str() +
                                 " + Z(" + std::to_string(f.p) + "^inf)^" + std::to_string(f.k[j])});
      for (const auto &fam : c->families)
        v.trace.push_back({"family", "th:Sol2",
                           "position " + std::to_string(fam.position) + ": primes p(" +
                               Affine{fam.a, fam.b}.str() +
                               ") each occur at one index, so their Sylow parts are eventually 0"});
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Checkers

namespace {

struct Samples {
  const SequenceSpec &spec;
  std::uint64_t L, q, per_position;

  explicit Samples(const SequenceSpec &s) : spec(s), L(s.prefix_length()), q(s.period()) {
    std::uint64_t f = 0;
    for (const auto &t : s.tail) {
      std::uint64_t c = 0;
      for (const auto &x : t.terms()) c += x.prime.at;
      f = std::max(f, c);
    }
    per_position = std::max<std::uint64_t>(4, f + 1);
  }

  // per_position consecutive indices at position j, starting at or after `from`.
  std::vector<std::uint64_t> at(std::uint64_t j, std::uint64_t from) const {
    std::uint64_t n = std::max(from, L);
    while ((n - L) % q != j) ++n;
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < per_position; ++i) out.push_back(n + i * q);
    return out;
  }
  // Every index in [from, from + q * per_position).
  std::vector<std::uint64_t> window(std::uint64_t from) const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = from; n < from + q * per_position; ++n) out.push_back(n);
    return out;
  }

  std::set<std::uint64_t> recurring_primes() const {
    std::set<std::uint64_t> all;
    for (std::uint64_t j = 0; j < q; ++j) {
      std::optional<std::set<std::uint64_t>> common;
      for (auto n : at(j, L)) {
        auto ps = seq_nth(spec, n).primes();
        if (!common) common = ps;
        else {
          std::set<std::uint64_t> keep;
          std::set_intersection(common->begin(), common->end(), ps.begin(), ps.end(),
                                std::inserter(keep, keep.end()));
          common = std::move(keep);
        }
      }
      all.merge(*common);
    }
    return all;
  }
};

constexpr std::uint64_t kMaxCheckedThreshold = 1'000'000;

} // namespace

std::vector<std::string> check_certificate(const SequenceSpec &spec, const TameCertificate &c) {
  std::vector<std::string> errs;
  const Samples S(spec);
  auto too_far = [&](std::uint64_t t) { return t > S.L + kMaxCheckedThreshold; };

  const std::uint64_t tt = c.torsion_threshold;
  if (too_far(tt)) return {"torsion_threshold out of range"};
  if (tt > 0 && is_torsion(seq_nth(spec, tt - 1)))
    errs.push_back("torsion_threshold is not the least one");
  for (auto n : S.window(std::max(tt, S.L)))
    if (!is_torsion(seq_nth(spec, n))) errs.push_back("G_" + std::to_string(n) + " is not torsion");
  for (std::uint64_t n = tt; n < S.L; ++n)
    if (!is_torsion(seq_nth(spec, n))) errs.push_back("G_" + std::to_string(n) + " is not torsion");

  const auto P = S.recurring_primes();
  std::set<std::uint64_t> listed;
  for (std::size_t i = 0; i < c.primes.size(); ++i) {
    if (i && c.primes[i].p <= c.primes[i - 1].p) errs.push_back("primes not strictly increasing");
    listed.insert(c.primes[i].p);
  }
  if (listed != P) errs.push_back("listed primes differ from the primes recurring in the tail");

  std::uint64_t horizon = std::max(tt, S.L);
  for (const auto &f : c.primes) {
    const std::string tag = "p = " + std::to_string(f.p) + ": ";
    if (f.F.size() != S.q || f.k.size() != S.q) {
      errs.push_back(tag + "forms must have one entry per tail position");
      continue;
    }
    if (f.threshold < S.L || too_far(f.threshold)) {
      errs.push_back(tag + "threshold out of range");
      continue;
    }
    horizon = std::max(horizon, f.threshold);
    auto expected = [&](std::uint64_t n) {
      const std::uint64_t j = spec.position(n);
      return direct_sum(f.F[j].instantiate(n), GroupDescriptor::of(Atom::prufer(f.p), f.k[j]));
    };
    bool ok = true;
    for (auto n : S.window(f.threshold)) {
      const GroupDescriptor F = f.F[spec.position(n)].instantiate(n);
      if (!is_finite(F) || !is_p_group(F, f.p)) {
        errs.push_back(tag + "F is not a finite " + std::to_string(f.p) + "-group at n = " +
                       std::to_string(n));
        ok = false;
        break;
      }
      if (p_primary(seq_nth(spec, n), f.p) != expected(n)) {
        errs.push_back(tag + "form fails at n = " + std::to_string(n));
        ok = false;
        break;
      }
    }
    if (ok && f.threshold > S.L &&
        p_primary(seq_nth(spec, f.threshold - 1), f.p) == expected(f.threshold - 1))
      errs.push_back(tag + "threshold is not the least one");
  }

  for (std::size_t i = 0; i < c.families.size(); ++i) {
    const auto &fam = c.families[i];
    if (i && !(c.families[i - 1] < fam)) errs.push_back("families not strictly increasing");
    if (fam.position >= S.q || fam.a < 1 || fam.b < 1) errs.push_back("malformed family");
  }
  if (errs.empty()) {
    for (std::uint64_t n = S.L; n < horizon + S.q * S.per_position; ++n) {
      std::set<std::uint64_t> seen, claimed;
      for (auto p : seq_nth(spec, n).primes())
        if (!P.count(p)) seen.insert(p);
      for (const auto &fam : c.families)
        if (fam.position == spec.position(n)) {
          const auto p = primes::nth_prime(Affine{fam.a, fam.b}.eval(n));
          if (!P.count(p)) claimed.insert(p);
        }
      if (seen != claimed) {
        errs.push_back("primes outside the fixed set at n = " + std::to_string(n) +
                       " are not the family primes");
        break;
      }
    }
  }
  return errs;
}

std::vector<std::string> check_witness(const SequenceSpec &input, const Witness &w) {
  const Decomposition d = decompose(input);
  const SequenceSpec &spec = w.part == Part::G ? input : w.part == Part::R ? d.R : d.D;
  const Samples S(spec);
  std::vector<std::string> errs;
  if (w.indices.start != S.L) errs.push_back("index rule start is not the prefix length");
  if (w.indices.period != S.q) errs.push_back("index rule period is not the tail period");
  if (!errs.empty()) return errs;

  std::vector<std::uint64_t> nontorsion;
  for (std::uint64_t j = 0; j < S.q; ++j) {
    std::size_t count = 0;
    const auto ns = S.at(j, S.L);
    for (auto n : ns) count += !is_torsion(seq_nth(spec, n));
    if (count == ns.size()) nontorsion.push_back(j);
    else if (count) errs.push_back("position " + std::to_string(j) + " mixes torsion and non-torsion");
  }

  if (w.kind == WitnessKind::ZN) {
    if (nontorsion.empty()) errs.push_back("no recurring non-torsion entries");
    if (w.indices.positions != nontorsion) errs.push_back("positions are not the non-torsion ones");
    if (w.atoms.size() != w.indices.positions.size()) {
      errs.push_back("one atom per position required");
      return errs;
    }
    for (std::size_t i = 0; i < w.atoms.size() && errs.empty(); ++i) {
      const Atom &a = w.atoms[i];
      if (!a.is_torsion_free()) {
        errs.push_back("atom " + a.str() + " does not have infinite order");
        continue;
      }
      for (auto n : S.at(w.indices.positions[i], S.L)) {
        const GroupDescriptor g = seq_nth(spec, n);
        if (g.mult(a).is_zero()) errs.push_back(a.str() + " is not a summand of G_" + std::to_string(n));
        else if (a.kind == AtomKind::Rationals && !g.mult(Atom::free_int()).is_zero())
          errs.push_back("Z is the smaller infinite-order atom at n = " + std::to_string(n));
      }
    }
    return errs;
  }

  if (!nontorsion.empty()) errs.push_back("clause (1) applies, a ZN witness is required");
  if (!primes::is_prime(w.p)) {
    errs.push_back("p is not prime");
    return errs;
  }
  const auto P = S.recurring_primes();
  auto bad_at = [&](std::uint64_t r) {
    std::vector<std::uint64_t> out;
    const std::uint64_t from = std::max(S.L, last_hit_bound(spec, r, false));
    for (std::uint64_t j = 0; j < S.q; ++j) {
      bool all = true;
      for (auto n : S.at(j, from)) all = all && !good_p_part(p_primary(seq_nth(spec, n), r));
      if (all) out.push_back(j);
    }
    return std::pair{out, from};
  };
  if (!P.count(w.p)) errs.push_back("p does not recur in the tail");
  for (auto r : P)
    if (r < w.p && !bad_at(r).first.empty())
      errs.push_back("the smaller prime " + std::to_string(r) + " already fails");
  const auto [bad, from] = bad_at(w.p);
  if (bad.empty()) errs.push_back("the p-parts are eventually F + Z(p^inf)^k");
  if (w.indices.positions != bad) errs.push_back("positions are not the failing ones");
  if (w.entries.size() != w.indices.positions.size()) {
    errs.push_back("one entry per position required");
    return errs;
  }
  if (!errs.empty()) return errs;
  for (std::size_t i = 0; i < w.entries.size(); ++i) {
    const SylowEntry &e = w.entries[i];
    const std::string tag = "position " + std::to_string(e.position) + ": ";
    if (e.position != w.indices.positions[i]) {
      errs.push_back(tag + "entry out of order");
      continue;
    }
    if (e.kernel_tag != kernel_tag(e.kind, w.p)) errs.push_back(tag + "kernel tag mismatch");
    if (!(e.group == sylow_entry(spec.tail[e.position], e.position, w.p).group))
      errs.push_back(tag + "group is not the canonical summand");
    if (!e.pieces.is_omega()) errs.push_back(tag + "pieces must be omega");
    for (auto n : S.at(e.position, from)) {
      const GroupDescriptor pp = p_primary(seq_nth(spec, n), w.p);
      const GroupDescriptor K = e.group.instantiate(n);
      SylowKind expect = SylowKind::BoundedDsc;
      if (pp.mult(Atom::prufer(w.p)).is_omega()) expect = SylowKind::DivisibleSummand;
      else if (!pp.towers().empty()) expect = SylowKind::DivisibleQuotient;
      if (e.kind != expect) {
        errs.push_back(tag + "kind should be " + to_string(expect));
        break;
      }
      bool ok = true;
      switch (e.kind) {
      case SylowKind::DivisibleSummand:
        ok = K == GroupDescriptor::of(Atom::prufer(w.p), Mult::omega());
        break;
      case SylowKind::DivisibleQuotient:
        // K is a summand of pp carrying an unbounded tower; canonical forms
        // may move part of a tower into atoms, so compare multiplicities.
        ok = is_p_group(K, w.p) && is_reduced(K) && K.towers().count(w.p) &&
             check_quotient_witness({w.p, K.towers().at(w.p), e.pieces}, K);
        for (std::uint64_t k = 1; ok && k < 128; ++k)
          ok = K.mult(Atom::cyclic(w.p, k)) <= pp.mult(Atom::cyclic(w.p, k));
        break;
      case SylowKind::BoundedDsc:
        ok = !K.is_trivial() && K == omega_cyclic_part(pp) && exponent(K).has_value();
        break;
      }
      if (!ok) {
        errs.push_back(tag + "group does not match G_" + std::to_string(n));
        break;
      }
    }
  }
  return errs;
}

} // namespace quasitame
