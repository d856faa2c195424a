#pragma once

#include <gmpxx.h>

#include <cstdint>

namespace quasitame {

using BigInt = mpz_class;

static_assert(sizeof(unsigned long) == sizeof(std::uint64_t),
              "LP64 platform expected for gmpxx long conversions");

inline BigInt big(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }
inline BigInt big(std::int64_t v) { return BigInt(static_cast<long>(v)); }
inline BigInt big(int v) { return BigInt(v); }

inline bool fits_u64(const BigInt &v) { return v.fits_ulong_p(); }
inline std::uint64_t to_u64(const BigInt &v) { return v.get_ui(); }

inline BigInt pow_u64(std::uint64_t base, std::uint64_t exp) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

} // namespace quasitame
