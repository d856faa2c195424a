#include "quasitame/dsl.hpp"

#include "quasitame/error.hpp"
#include "quasitame/primes.hpp"

#include <cctype>
#include <functional>
#include <sstream>

namespace quasitame {

namespace {

enum class Tok { Int, Ident, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

std::string describe(const Token &t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

std::vector<Token> lex(const std::string &src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&] {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < src.size()) {
    const unsigned char c = static_cast<unsigned char>(src[i]);
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    if (std::isspace(c)) {
      advance();
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isdigit(c)) {
      t.kind = Tok::Int;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        t.text += src[i];
        advance();
      }
    } else if (std::isalpha(c)) {
      t.kind = Tok::Ident;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        t.text += src[i];
        advance();
      }
    } else if (std::string("()[],;:+*^-").find(static_cast<char>(c)) != std::string::npos) {
      t.kind = Tok::Punct;
      t.text = std::string(1, static_cast<char>(c));
      advance();
    } else {
      std::ostringstream bad;
      if (c < 0x20 || c >= 0x7f) bad << "byte 0x" << std::hex << static_cast<int>(c);
      else bad << "'" << static_cast<char>(c) << "'";
      throw SyntaxError(line, col, {"a token"}, bad.str());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

struct Base {
  bool at = false;
  std::uint64_t value = 0; // fixed integer base
  Affine index;
};

enum class ExpKind { None, Int, Affine, Inf };

struct Exp {
  ExpKind kind = ExpKind::None;
  Affine aff; // Int: {0, k}
};

class Parser {
public:
  explicit Parser(const std::string &text) : toks_(lex(text)) {}

  GroupExpr top() {
    const Token &t = peek();
    if (t.kind == Tok::Ident && (t.text == "levels" || t.text == "tail" || t.text == "maps") &&
        toks_[pos_ + 1].text == ":")
      return invsys();
    if (is("prod")) return product();
    GroupDescriptor d = discrete();
    expect_end();
    finish();
    return d;
  }

  SequenceSpec product() {
    expect("prod");
    expect("n");
    expect(":");
    SequenceSpec s;
    if (accept("[")) {
      s.prefix.push_back(discrete());
      while (accept(",")) s.prefix.push_back(discrete());
      expect("]");
    }
    s.tail.push_back(entry(true));
    while (accept(";")) s.tail.push_back(entry(true));
    expect_end();
    finish();
    return s;
  }

  GroupDescriptor discrete_only() {
    GroupDescriptor d = discrete();
    expect_end();
    finish();
    return d;
  }

  EntryTemplate template_only() {
    EntryTemplate t = entry(true);
    expect_end();
    finish();
    return t;
  }

  InverseSystem invsys() {
    InverseSystem s;
    if (accept_section("levels"))
      while (peek().kind == Tok::Int) {
        IntMatrix m = block();
        s.prefix_levels.emplace_back(m.rows(), m);
      }
    if (accept_section("maps"))
      while (peek().kind == Tok::Int) s.prefix_maps.push_back(block());
    section("tail");
    section("level");
    {
      IntMatrix m = block();
      s.tail.level = FgPresentation(m.rows(), m);
    }
    if (accept_section("accumulate")) {
      IntMatrix m = block();
      s.tail.accumulate = FgPresentation(m.rows(), m);
    }
    if (accept_section("coupling")) s.tail.coupling = block();
    section("descent");
    s.tail.descent = block();
    if (accept_section("splice")) s.tail.splice = block();
    expect_end();
    for (auto &d : system_check(s)) violations_.push_back(d);
    finish();
    return s;
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> violations_;

  const Token &peek() const { return toks_[pos_]; }
  bool is(const std::string &text) const {
    return peek().kind != Tok::End && peek().text == text;
  }
  bool accept(const std::string &text) {
    if (!is(text)) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw SyntaxError(peek().line, peek().col, std::move(expected), describe(peek()));
  }
  const Token &expect(const std::string &text) {
    if (!is(text)) fail({"'" + text + "'"});
    return toks_[pos_++];
  }
  void expect_end() {
    if (peek().kind != Tok::End) fail({"end of input"});
  }
  bool accept_section(const std::string &name) {
    if (!is(name) || toks_[pos_ + 1].text != ":") return false;
    pos_ += 2;
    return true;
  }
  void section(const std::string &name) {
    expect(name);
    expect(":");
  }
  void violation(const Token &at, const std::string &msg) {
    violations_.push_back("line " + std::to_string(at.line) + ", column " +
                          std::to_string(at.col) + ": " + msg);
  }
  void finish() {
    if (!violations_.empty()) throw SemanticError(violations_);
  }

  std::uint64_t integer() {
    if (peek().kind != Tok::Int) fail({"integer"});
    const Token &t = toks_[pos_++];
    std::uint64_t v = 0;
    for (char c : t.text) {
      if (__builtin_mul_overflow(v, 10, &v) || __builtin_add_overflow(v, c - '0', &v)) {
        violation(t, "integer " + t.text + " is too large");
        return 1;
      }
    }
    return v;
  }

  BigInt signed_integer() {
    const bool neg = accept("-");
    if (peek().kind != Tok::Int) fail({"integer"});
    BigInt v(toks_[pos_++].text);
    return neg ? BigInt(-v) : v;
  }

  IntMatrix block() {
    const Token &at = peek();
    const std::uint64_t r = integer(), c = integer();
    if (r > kMaxMatrixDim || c > kMaxMatrixDim)
      throw Error(ErrorKind::SizeError, "line " + std::to_string(at.line) + ": matrix " +
                                            std::to_string(r) + "x" + std::to_string(c) +
                                            " exceeds 64x64");
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = signed_integer();
    return m;
  }

  // affine := int | "n" | "n+" int | int "*n" | int "*n+" int
  Affine affine(bool &uses_n) {
    Affine a;
    if (accept("n")) {
      a.a = 1;
      uses_n = true;
      if (accept("+")) a.b = integer();
      return a;
    }
    if (peek().kind != Tok::Int) fail({"integer", "'n'"});
    const std::uint64_t k = integer();
    if (accept("*")) {
      expect("n");
      uses_n = true;
      a.a = k;
      if (accept("+")) a.b = integer();
      return a;
    }
    a.b = k;
    return a;
  }

  Base base(bool &uses_n) {
    Base b;
    if (is("p")) {
      ++pos_;
      expect("(");
      const Token &at = peek();
      b.at = true;
      b.index = affine(uses_n);
      if (b.index.b < 1) violation(at, "p(...) needs an index >= 1 at n = 0");
      expect(")");
      return b;
    }
    if (peek().kind != Tok::Int) fail({"integer", "'p'"});
    b.value = integer();
    return b;
  }

  Exp exponent(bool &uses_n) {
    Exp e;
    if (!accept("^")) return e;
    if (accept("inf")) {
      e.kind = ExpKind::Inf;
      return e;
    }
    const bool paren = accept("(");
    if (!paren && peek().kind != Tok::Int && !is("n")) fail({"integer", "'n'", "'inf'", "'('"});
    bool local = false;
    e.aff = affine(local);
    uses_n = uses_n || local;
    e.kind = e.aff.is_constant() ? ExpKind::Int : ExpKind::Affine;
    if (paren) expect(")");
    return e;
  }

  Mult mult() {
    if (accept("omega")) return Mult::omega();
    if (peek().kind != Tok::Int) fail({"integer", "'omega'"});
    return Mult(integer());
  }

  struct Pieces {
    std::vector<RawSummand> raw;
    std::vector<ParamTerm> terms;
  };

  void cyclic(Pieces &out, const Token &at, const Base &b, const Exp &e, Mult m) {
    if (e.kind == ExpKind::Affine && e.aff.b < 1)
      violation(at, "exponent " + e.aff.str() + " is 0 at n = 0");
    if (b.at) {
      ParamTerm t;
      t.prime = {true, 0, b.index};
      t.mult = m;
      if (e.kind == ExpKind::Inf) t.kind = TermKind::Prufer;
      else if (e.kind == ExpKind::None) t.exp = {0, 1};
      else if (e.kind == ExpKind::Int && e.aff.b == 0) return; // C(p^0) = 0
      else t.exp = e.aff;
      out.terms.push_back(t);
      return;
    }
    if (b.value == 0) {
      violation(at, "C(0) is not a cyclic group");
      return;
    }
    if (b.value == 1) return;
    if (e.kind == ExpKind::Int && e.aff.b == 0) return;
    std::vector<std::pair<std::uint64_t, unsigned>> fac;
    try {
      fac = primes::factorize(b.value);
    } catch (const Error &err) {
      violation(at, err.what());
      return;
    }
    for (auto [p, k] : fac) {
      ParamTerm t;
      t.prime = {false, p, {}};
      t.mult = m;
      switch (e.kind) {
      case ExpKind::Inf: t.kind = TermKind::Prufer; break;
      case ExpKind::None: t.exp = {0, k}; break;
      case ExpKind::Int:
      case ExpKind::Affine:
        if (__builtin_mul_overflow(e.aff.a, std::uint64_t{k}, &t.exp.a) ||
            __builtin_mul_overflow(e.aff.b, std::uint64_t{k}, &t.exp.b)) {
          violation(at, "exponent too large");
          return;
        }
        break;
      }
      out.terms.push_back(t);
    }
  }

  void term(Pieces &out, bool &uses_n) {
    const Token at = peek();
    std::function<void(Mult)> emit;
    if (accept("Z")) {
      emit = [&](Mult m) { out.raw.push_back({Atom::free_int(), m}); };
    } else if (accept("Q")) {
      emit = [&](Mult m) { out.raw.push_back({Atom::rationals(), m}); };
    } else if (peek().kind == Tok::Int && peek().text == "0") {
      ++pos_;
      emit = [](Mult) {};
    } else if (accept("C")) {
      expect("(");
      const Base b = base(uses_n);
      const Exp e = exponent(uses_n);
      expect(")");
      emit = [&, b, e](Mult m) { cyclic(out, at, b, e, m); };
    } else if (accept("tower")) {
      expect("(");
      const Base b = base(uses_n);
      expect(",");
      const Token sat = peek();
      const Affine start = affine(uses_n);
      std::uint64_t step = 1;
      if (accept(",")) {
        const Token stat = peek();
        step = integer();
        if (step < 1) violation(stat, "tower step must be >= 1");
      }
      expect(")");
      if (start.b < 1) violation(sat, "tower start must be >= 1 at n = 0");
      if (!b.at && !primes::is_prime(b.value))
        violation(at, "tower base " + std::to_string(b.value) + " is not prime");
      emit = [&, b, start, step](Mult m) {
        ParamTerm t;
        t.kind = TermKind::Tower;
        t.prime = b.at ? PrimeRef{true, 0, b.index} : PrimeRef{false, b.value, {}};
        t.exp = start;
        t.step = std::max<std::uint64_t>(step, 1);
        t.mult = m;
        out.terms.push_back(t);
      };
    } else {
      fail({"'Z'", "'Q'", "'C'", "'tower'", "'0'"});
    }
    Mult m = 1;
    if (accept("^")) m = mult();
    emit(m);
  }

  EntryTemplate entry(bool allow_n) {
    const Token at = peek();
    Pieces pc;
    bool uses_n = false;
    term(pc, uses_n);
    while (accept("+")) term(pc, uses_n);
    if (uses_n && !allow_n) violation(at, "n is not allowed outside the tail of a product");
    try {
      return EntryTemplate(canonicalize(pc.raw), pc.terms);
    } catch (const Error &e) {
      violation(at, e.what());
      return {};
    }
  }

  GroupDescriptor discrete() {
    EntryTemplate t = entry(false);
    return t.is_constant() ? t.base() : GroupDescriptor{};
  }
};

std::string block_text(const IntMatrix &m, const std::string &indent) {
  std::ostringstream os;
  os << indent << m.rows() << " " << m.cols() << "\n";
  for (std::size_t i = 0; m.cols() > 0 && i < m.rows(); ++i) {
    os << indent;
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j).get_str();
    os << "\n";
  }
  return os.str();
}

} // namespace

GroupExpr parse(const std::string &text) { return Parser(text).top(); }

GroupDescriptor parse_descriptor(const std::string &text) { return Parser(text).discrete_only(); }
EntryTemplate parse_template(const std::string &text) { return Parser(text).template_only(); }
SequenceSpec parse_product(const std::string &text) { return Parser(text).product(); }
InverseSystem parse_invsys(const std::string &text) { return Parser(text).invsys(); }

std::string pretty_invsys(const InverseSystem &s) {
  std::string out;
  if (!s.prefix_levels.empty()) {
    out += "levels:\n";
    for (const auto &l : s.prefix_levels) out += block_text(l.relations(), "  ");
  }
  if (!s.prefix_maps.empty()) {
    out += "maps:\n";
    for (const auto &m : s.prefix_maps) out += block_text(m, "  ");
  }
  out += "tail:\n  level:\n" + block_text(s.tail.level.relations(), "    ");
  if (s.tail.accumulate) out += "  accumulate:\n" + block_text(s.tail.accumulate->relations(), "    ");
  if (s.tail.coupling) out += "  coupling:\n" + block_text(*s.tail.coupling, "    ");
  out += "  descent:\n" + block_text(s.tail.descent, "    ");
  if (!s.prefix_levels.empty()) out += "  splice:\n" + block_text(s.tail.splice, "    ");
  return out;
}

std::string pretty(const GroupExpr &e) {
  if (const auto *s = std::get_if<SequenceSpec>(&e)) return s->str();
  if (const auto *d = std::get_if<GroupDescriptor>(&e)) return d->str();
  return pretty_invsys(std::get<InverseSystem>(e));
}

} // namespace quasitame
