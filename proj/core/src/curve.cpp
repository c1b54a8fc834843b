#include "selk/curve.hpp"

#include <algorithm>

namespace selk::curve {

using numtheory::factorize;
using numtheory::is_prime;
using numtheory::kronecker;
using numtheory::legendre;

SplitType classify_in_K(i64 p, i64 theta) {
  if (theta == 0 || theta == 1) throw DomainError("classify_in_K: theta must define a quadratic field");
  if (p == 2) {
    i64 r = ((theta % 8) + 8) % 8;
    if (r == 1) return SplitType::Split;
    if (r == 5) return SplitType::Inert;
    return SplitType::Ramified;  // theta even or theta = 2,3 mod 4
  }
  if (theta % p == 0) return SplitType::Ramified;
  return legendre(theta, p) == 1 ? SplitType::Split : SplitType::Inert;
}

bool CurveData::in_sigma(i64 p) const {
  return std::binary_search(sigma.begin(), sigma.end(), p);
}

CurveData make_curve(i64 a1, i64 a2, i64 a3, i64 theta) {
  if (a1 == a2 || a1 == a3 || a2 == a3) throw DomainError("make_curve: roots must be distinct");
  if (theta == 0 || theta == 1 || !numtheory::is_squarefree(theta))
    throw DomainError("make_curve: theta must be squarefree and != 0, 1");
  CurveData c;
  c.a1 = a1;
  c.a2 = a2;
  c.a3 = a3;
  c.alpha = a1 - a2;
  c.beta = a1 - a3;
  c.gamma = a2 - a3;
  c.theta = theta;
  std::vector<i64> s = {2};
  for (auto& [p, e] : factorize(c.alpha * c.beta * c.gamma).entries) s.push_back(p);
  for (auto& [p, e] : factorize(theta).entries) {
    if (classify_in_K(p, theta) == SplitType::Ramified) s.push_back(p);
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  c.sigma = std::move(s);
  c.N = 1;
  for (i64 p : c.sigma) c.N *= p;
  return c;
}

PrimeClass prime_class(i64 p, const CurveData& curve) {
  if (curve.in_sigma(p)) return PrimeClass::Sigma;
  if (classify_in_K(p, curve.theta) == SplitType::Inert) return PrimeClass::P2;
  // p splits in K (ramified primes all lie in Sigma). Separate by Q(sqrt(alpha*beta)).
  i64 ab = curve.alpha * curve.beta;
  i64 sf = numtheory::squarefree_part(ab);
  if (sf == 1) return PrimeClass::P1;  // alpha*beta square: P0 is empty
  return kronecker(sf, p) == 1 ? PrimeClass::P1 : PrimeClass::P0;
}

TwistDecomposition twist_decompose(const SquarefreeInt& d, const CurveData& curve) {
  TwistDecomposition t;
  t.a = d.sign;
  t.d0 = t.d1 = t.d2 = 1;
  for (auto& [p, e] : d.factorization.entries) {
    switch (prime_class(p, curve)) {
      case PrimeClass::Sigma: t.a *= p; break;
      case PrimeClass::P0: t.d0 *= p; t.p0.push_back(p); break;
      case PrimeClass::P1: t.d1 *= p; t.p1.push_back(p); break;
      case PrimeClass::P2: t.d2 *= p; t.p2.push_back(p); break;
    }
  }
  return t;
}

TwistDecomposition twist_decompose(i64 d, const CurveData& curve) {
  return twist_decompose(SquarefreeInt::make(d), curve);
}

int omega_EK(const SquarefreeInt& d, const CurveData& curve) {
  int n = 0;
  for (auto& [p, e] : d.factorization.entries)
    if (prime_class(p, curve) == PrimeClass::P2) ++n;
  return n;
}

int omega_EK(i64 d, const CurveData& curve) { return omega_EK(SquarefreeInt::make(d), curve); }

}  // namespace selk::curve
