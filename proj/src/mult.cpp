#include "quasitame/mult.hpp"

#include "quasitame/error.hpp"

#include <charconv>
#include <limits>

namespace quasitame {

Mult &Mult::operator+=(Mult other) {
  if (omega_ || other.omega_) {
    *this = omega();
    return *this;
  }
  if (value_ > std::numeric_limits<std::uint64_t>::max() - other.value_)
    throw Error(ErrorKind::TooLarge, "multiplicity overflow");
  value_ += other.value_;
  return *this;
}

std::string Mult::str() const {
  return omega_ ? std::string("omega") : std::to_string(value_);
}

std::optional<Mult> Mult::parse(const std::string &text) {
  if (text == "omega") return omega();
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    return std::nullopt;
  return Mult(v);
}

} // namespace quasitame
