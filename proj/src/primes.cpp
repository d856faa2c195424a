#include "quasitame/primes.hpp"

#include "quasitame/error.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

namespace quasitame::primes {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Deterministic for all 64-bit n with these bases.
bool miller_rabin(u64 n) {
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                29ULL, 31ULL, 37ULL}) {
    if (a % n == 0) continue;
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 x = 2, y = 2, d = 1;
    auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_rec(u64 n, std::vector<u64> &out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

// Grow-on-demand sieve shared by nth_prime / prime_index.
class PrimeTable {
public:
  u64 nth(u64 k) {
    std::lock_guard lock(mutex_);
    while (primes_.size() < k) grow(limit_ * 2);
    return primes_[k - 1];
  }

  u64 index_of(u64 p) {
    constexpr u64 kMaxSieve = u64{1} << 31;
    if (p > kMaxSieve)
      throw Error(ErrorKind::TooLarge, "prime index of " + std::to_string(p) +
                                           " exceeds sieve bound");
    std::lock_guard lock(mutex_);
    while (limit_ < p) grow(std::max(limit_ * 2, p));
    auto it = std::upper_bound(primes_.begin(), primes_.end(), p);
    return static_cast<u64>(it - primes_.begin());
  }

private:
  void grow(u64 new_limit) {
    std::vector<bool> composite(new_limit + 1, false);
    primes_.clear();
    for (u64 i = 2; i <= new_limit; ++i) {
      if (composite[i]) continue;
      primes_.push_back(i);
      for (u64 j = i * i; j <= new_limit; j += i) composite[j] = true;
    }
    limit_ = new_limit;
  }

  std::mutex mutex_;
  std::vector<u64> primes_;
  u64 limit_ = 1;
};

PrimeTable &table() {
  static PrimeTable t;
  return t;
}

} // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  return miller_rabin(n);
}

std::vector<std::pair<u64, unsigned>> factorize(u64 n) {
  if (n == 0) throw Error(ErrorKind::InvalidOrder, "order 0");
  if (n > kFactorBound)
    throw Error(ErrorKind::FactorizationOverflow,
                std::to_string(n) + " exceeds 2^63");
  std::vector<u64> flat;
  // Trial division covers every order seen in practice; rho is a fallback.
  for (u64 p = 2; p * p <= n && p < 1000000; ++p) {
    while (n % p == 0) {
      flat.push_back(p);
      n /= p;
    }
  }
  factor_rec(n, flat);
  std::sort(flat.begin(), flat.end());
  std::vector<std::pair<u64, unsigned>> result;
  for (u64 p : flat) {
    if (!result.empty() && result.back().first == p)
      ++result.back().second;
    else
      result.emplace_back(p, 1);
  }
  return result;
}

u64 nth_prime(u64 k) {
  if (k == 0) throw Error(ErrorKind::InvalidOrder, "prime index is 1-based");
  return table().nth(k);
}

u64 prime_index(u64 p) { return table().index_of(p); }

bool as_prime_power(u64 n, u64 &p, unsigned &k) {
  if (n < 2 || n > kFactorBound) return false;
  auto f = factorize(n);
  if (f.size() != 1) return false;
  p = f[0].first;
  k = f[0].second;
  return true;
}

} // namespace quasitame::primes
