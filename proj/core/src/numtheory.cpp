#include "selk/numtheory.hpp"

#include <algorithm>
#include <cstdlib>

namespace selk::numtheory {

u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

i64 gcd64(i64 a, i64 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    i64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  // Sinclair's base set, deterministic below 2^64.
  for (u64 a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
    u64 x = powmod(a % n, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

u64 pollard_rho(u64 n) {
  if ((n & 1) == 0) return 2;
  u64 c = 1;
  while (true) {
    u64 x = 2, y = 2, d = 1;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      u64 diff = x > y ? x - y : y - x;
      d = diff == 0 ? n : std::__gcd(diff, n);
    }
    if (d != n) return d;
    ++c;
  }
}

void factor_rec(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

Factorization factorize(i64 n) {
  if (n == 0) throw DomainError("factorize: zero input");
  u64 m = static_cast<u64>(n < 0 ? -n : n);
  std::vector<u64> primes;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull}) {
    while (m % p == 0) {
      primes.push_back(p);
      m /= p;
    }
  }
  for (u64 p = 37; p * p <= m && p < 100000; p += 2) {
    while (m % p == 0) {
      primes.push_back(p);
      m /= p;
    }
  }
  factor_rec(m, primes);
  std::sort(primes.begin(), primes.end());
  Factorization f;
  for (std::size_t i = 0; i < primes.size();) {
    std::size_t j = i;
    while (j < primes.size() && primes[j] == primes[i]) ++j;
    f.entries.emplace_back(static_cast<i64>(primes[i]), static_cast<int>(j - i));
    i = j;
  }
  return f;
}

bool is_squarefree(i64 n) {
  if (n == 0) return false;
  return factorize(n).squarefree();
}

i64 squarefree_part(i64 n) {
  if (n == 0) throw DomainError("squarefree_part: zero input");
  auto f = factorize(n);
  i64 r = n < 0 ? -1 : 1;
  for (auto& [p, e] : f.entries)
    if (e & 1) r *= p;
  return r;
}

SquarefreeInt SquarefreeInt::make(i64 d) {
  if (d == 0) throw DomainError("SquarefreeInt: zero");
  SquarefreeInt s;
  s.factorization = factorize(d);
  if (!s.factorization.squarefree()) throw DomainError("SquarefreeInt: not squarefree");
  s.value = d;
  s.sign = d < 0 ? -1 : 1;
  return s;
}

SquarefreeInt SquarefreeInt::from_primes(i64 d, const std::vector<i64>& primes) {
  SquarefreeInt s;
  s.value = d;
  s.sign = d < 0 ? -1 : 1;
  i64 prod = 1;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (i > 0 && primes[i] <= primes[i - 1]) throw DomainError("from_primes: primes must increase");
    s.factorization.entries.emplace_back(primes[i], 1);
    prod *= primes[i];
  }
  if (prod != (d < 0 ? -d : d)) throw DomainError("from_primes: product mismatch");
  return s;
}

int jacobi(i64 m, i64 n) {
  if (n <= 0 || (n & 1) == 0) throw DomainError("jacobi: denominator must be odd and positive");
  if (gcd64(m, n) != 1) throw DomainError("jacobi: arguments must be coprime");
  m %= n;
  if (m < 0) m += n;
  int t = 1;
  while (m != 0) {
    while ((m & 1) == 0) {
      m >>= 1;
      i64 r = n & 7;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(m, n);
    if ((m & 3) == 3 && (n & 3) == 3) t = -t;
    m %= n;
  }
  return t;  // n == 1 here since the inputs were coprime
}

int legendre(i64 a, i64 p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  u64 r = powmod(static_cast<u64>(a), static_cast<u64>((p - 1) / 2), static_cast<u64>(p));
  return r == 1 ? 1 : -1;
}

int kronecker(i64 a, i64 n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int sign = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) sign = -sign;
  }
  int v = 0;
  while ((n & 1) == 0) {
    n >>= 1;
    ++v;
  }
  if (v) {
    if ((a & 1) == 0) return 0;
    i64 r = ((a % 8) + 8) % 8;
    if ((v & 1) && (r == 3 || r == 5)) sign = -sign;
  }
  if (gcd64(a, n) != 1) return 0;
  return sign * jacobi(a, n);
}

int valuation(i64 n, i64 p) {
  if (n == 0) throw DomainError("valuation: zero input");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

int hilbert(i64 a, i64 b, Place v) {
  if (a == 0 || b == 0) throw DomainError("hilbert: zero argument");
  if (v.is_real()) return (a < 0 && b < 0) ? -1 : 1;
  i64 p = v.p;
  if (p == 2) {
    int al = valuation(a, 2), be = valuation(b, 2);
    i64 u = a >> al, w = b >> be;
    auto eps = [](i64 x) { return ((((x % 8) + 8) % 8) >> 1) & 1; };        // (x-1)/2 mod 2
    auto om = [](i64 x) { i64 r = ((x % 8) + 8) % 8; return (r == 3 || r == 5) ? 1 : 0; };  // (x^2-1)/8 mod 2
    int e = eps(u) * eps(w) + al * om(w) + be * om(u);
    return (e & 1) ? -1 : 1;
  }
  int al = valuation(a, p), be = valuation(b, p);
  i64 u = a, w = b;
  for (int i = 0; i < al; ++i) u /= p;
  for (int i = 0; i < be; ++i) w /= p;
  int s = 1;
  if ((al & 1) && (be & 1) && legendre(-1, p) == -1) s = -s;
  if (be & 1) s *= legendre(u, p);
  if (al & 1) s *= legendre(w, p);
  return s;
}

int hilbert_q(i64 a_num, i64 a_den, i64 b_num, i64 b_den, Place v) {
  if (a_den == 0 || b_den == 0) throw DomainError("hilbert_q: zero denominator");
  // (n/d) and n*d lie in the same square class.
  return hilbert(a_num * a_den, b_num * b_den, v);
}

}  // namespace selk::numtheory
