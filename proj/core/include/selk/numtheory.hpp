// Exact integer arithmetic underneath the descent machinery: factorization,
// Jacobi/Kronecker/Legendre symbols, and quadratic Hilbert symbols over Q_v.
//
// Everything here is pure and reentrant. Inputs are desk-scale (< 2^63);
// factorization is trial division with a Pollard-rho fallback.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace selk::numtheory {

using i64 = std::int64_t;
using u64 = std::uint64_t;

// Thrown when an operation is called outside its domain (even Jacobi
// denominator, zero Hilbert argument, non-squarefree twist, ...).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);
i64 gcd64(i64 a, i64 b);

// Deterministic Miller-Rabin, valid for all n < 2^64.
bool is_prime(u64 n);

struct Factorization {
  // (prime, exponent) with primes strictly increasing.
  std::vector<std::pair<i64, int>> entries;

  int omega() const { return static_cast<int>(entries.size()); }
  bool squarefree() const {
    for (auto& [p, e] : entries)
      if (e > 1) return false;
    return true;
  }
  i64 value() const {
    i64 v = 1;
    for (auto& [p, e] : entries)
      for (int i = 0; i < e; ++i) v *= p;
    return v;
  }
};

// Factors |n|, n != 0.
Factorization factorize(i64 n);

bool is_squarefree(i64 n);
// Largest squarefree divisor of |n|, with the sign of n.
i64 squarefree_part(i64 n);

// A nonzero squarefree integer carried with its factorization.
struct SquarefreeInt {
  i64 value = 1;
  int sign = 1;
  Factorization factorization;  // of |value|

  static SquarefreeInt make(i64 d);
  // Fast path for callers that already factored |d| (primes increasing,
  // exponents 1); validated only by an inexpensive product check.
  static SquarefreeInt from_primes(i64 d, const std::vector<i64>& primes);
};

// Jacobi symbol (m/n): n odd positive, gcd(m,n) = 1.
int jacobi(i64 m, i64 n);
// Legendre symbol (a/p) for odd prime p; 0 when p | a.
int legendre(i64 a, i64 p);
// Kronecker symbol (a/n), the full extension (n any nonzero integer).
int kronecker(i64 a, i64 n);

// v_p(n) for n != 0.
int valuation(i64 n, i64 p);

// Place marker for Hilbert symbols: 0 encodes the real place, otherwise a
// prime (2 or odd).
struct Place {
  i64 p = 0;
  bool is_real() const { return p == 0; }
  bool operator==(const Place&) const = default;
};
inline constexpr Place real_place{0};

// Quadratic Hilbert symbol (a,b)_v in {+1,-1}; a, b nonzero integers.
// Odd p uses the tame formula, p = 2 the mod-8 epsilon/omega formula.
int hilbert(i64 a, i64 b, Place v);
// Rational entry point: (a_num/a_den, b_num/b_den)_v.
int hilbert_q(i64 a_num, i64 a_den, i64 b_num, i64 b_den, Place v);

}  // namespace selk::numtheory
