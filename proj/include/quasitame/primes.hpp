#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace quasitame::primes {

/// Largest accepted input to factorize(): 2^63.
inline constexpr std::uint64_t kFactorBound = std::uint64_t{1} << 63;

bool is_prime(std::uint64_t n);

/// Prime-power factorization in increasing prime order. n must be in
/// [1, 2^63]; throws FactorizationOverflow above, InvalidOrder on 0.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);

/// k-th prime, 1-based: nth_prime(1) == 2.
std::uint64_t nth_prime(std::uint64_t k);

/// Number of primes <= p, for p prime (so prime_index(nth_prime(k)) == k).
std::uint64_t prime_index(std::uint64_t p);

/// If n = p^k for a prime p and k >= 1, returns {p, k}.
bool as_prime_power(std::uint64_t n, std::uint64_t &p, unsigned &k);

} // namespace quasitame::primes
