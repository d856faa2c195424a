#pragma once

// Random inputs for the property tests and the acceptance run.
//
// Product specs: an optional prefix of 0..3 constant entries, then 1..3 tail
// templates of 1..3 terms each. A term is Z, Q, C(q), C(q^e), C(q^inf) or
// tower(q, s[, d]) with q in {2, 3, 5} or p(a*n+b), e and s constant or
// affine in n, and multiplicity 1, 2 or omega. Z, Q and omega are drawn less
// often so that both verdicts are common.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace quasitame::testing {

class SpecGen {
public:
  explicit SpecGen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return rng_() % n; }
  bool chance(int percent) { return below(100) < static_cast<std::uint64_t>(percent); }

  std::string prime(bool tail) {
    static const char *fixed[] = {"2", "3", "5"};
    static const char *at[] = {"p(n+1)", "p(2*n+1)", "p(n+3)", "p(3*n+2)"};
    if (tail && chance(30)) return at[below(4)];
    return fixed[below(3)];
  }

  std::string exponent(bool tail) {
    static const char *affine[] = {"(n+1)", "(2*n+1)", "(n+2)"};
    if (tail && chance(30)) return affine[below(3)];
    return std::to_string(1 + below(4));
  }

  std::string mult() {
    if (chance(15)) return "^omega";
    return chance(25) ? "^2" : "";
  }

  std::string term(bool tail) {
    const auto r = below(100);
    std::string t;
    if (r < 8) t = "Z";
    else if (r < 14) t = "Q";
    else if (r < 50) t = "C(" + prime(tail) + "^" + exponent(tail) + ")";
    else if (r < 60) t = "C(" + std::to_string(2 + below(40)) + ")";
    else if (r < 82) t = "C(" + prime(tail) + "^inf)";
    else {
      t = "tower(" + prime(tail) + ", " + (tail && chance(40) ? std::string("n+1") : std::to_string(1 + below(3)));
      if (chance(40)) t += ", " + std::to_string(1 + below(3));
      t += ")";
    }
    return t + mult();
  }

  std::string entry(bool tail) {
    if (chance(8)) return "0";
    std::string s;
    const auto k = 1 + below(3);
    for (std::uint64_t i = 0; i < k; ++i) s += (i ? " + " : "") + term(tail);
    return s;
  }

  /// A constant (n-free) discrete entry.
  std::string discrete() { return entry(false); }

  std::string spec() {
    std::string s = "prod n: ";
    const auto pre = below(4);
    if (pre) {
      s += "[";
      for (std::uint64_t i = 0; i < pre; ++i) s += (i ? ", " : "") + discrete();
      s += "] ";
    }
    const auto q = 1 + below(3);
    for (std::uint64_t j = 0; j < q; ++j) s += (j ? "; " : "") + entry(true);
    return s;
  }

  /// Finitely generated constant entries only (Z and finite cyclic groups).
  std::string fg_entry() {
    if (chance(15)) return "0";
    std::string s;
    const auto k = 1 + below(3);
    for (std::uint64_t i = 0; i < k; ++i) {
      s += i ? " + " : "";
      s += chance(25) ? std::string("Z") : "C(" + std::to_string(2 + below(30)) + ")";
      if (chance(20)) s += "^" + std::to_string(2 + below(2));
    }
    return s;
  }

  std::string fg_spec() {
    std::string s = "prod n: ";
    const auto pre = below(3);
    if (pre) {
      s += "[";
      for (std::uint64_t i = 0; i < pre; ++i) s += (i ? ", " : "") + fg_entry();
      s += "] ";
    }
    const auto q = 1 + below(3);
    for (std::uint64_t j = 0; j < q; ++j) s += (j ? "; " : "") + fg_entry();
    return s;
  }

  /// A reduced p-group: finite cyclic summands, omega multiplicities and towers.
  std::string reduced_p_group(std::uint64_t p) {
    const std::string q = std::to_string(p);
    std::string s;
    const auto k = 1 + below(4);
    for (std::uint64_t i = 0; i < k; ++i) {
      s += i ? " + " : "";
      if (chance(30)) {
        s += "tower(" + q + ", " + std::to_string(1 + below(5));
        if (chance(50)) s += ", " + std::to_string(1 + below(4));
        s += ")";
      } else {
        s += "C(" + q + "^" + std::to_string(1 + below(8)) + ")";
      }
      if (chance(30)) s += chance(50) ? "^omega" : "^" + std::to_string(2 + below(5));
    }
    return s;
  }

private:
  std::mt19937_64 rng_;
};

} // namespace quasitame::testing
