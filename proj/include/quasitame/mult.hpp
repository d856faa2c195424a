#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace quasitame {

/// A cardinal in N ∪ {ω}. Used for atom multiplicities, ranks and final
/// ranks; all infinite bookkeeping in the library goes through this type.
class Mult {
public:
  constexpr Mult() = default;
  constexpr Mult(std::uint64_t n) : value_(n) {} // NOLINT(google-explicit-constructor): 3 + Mult::omega() etc.

  static constexpr Mult omega() {
    Mult m;
    m.omega_ = true;
    return m;
  }

  constexpr bool is_omega() const { return omega_; }
  constexpr bool is_finite() const { return !omega_; }
  constexpr bool is_zero() const { return !omega_ && value_ == 0; }
  /// Finite value; 0 when ω (callers check is_omega first).
  constexpr std::uint64_t value() const { return omega_ ? 0 : value_; }

  Mult &operator+=(Mult other);
  friend Mult operator+(Mult a, Mult b) { return a += b; }

  friend constexpr bool operator==(Mult a, Mult b) {
    return a.omega_ == b.omega_ && (a.omega_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(Mult a, Mult b) {
    if (a.omega_ || b.omega_) {
      if (a.omega_ && b.omega_) return std::strong_ordering::equal;
      return a.omega_ ? std::strong_ordering::greater
                      : std::strong_ordering::less;
    }
    return a.value_ <=> b.value_;
  }

  /// "omega" or the decimal value.
  std::string str() const;
  static std::optional<Mult> parse(const std::string &text);

private:
  std::uint64_t value_ = 0;
  bool omega_ = false;
};

using CardinalCount = Mult;

} // namespace quasitame
