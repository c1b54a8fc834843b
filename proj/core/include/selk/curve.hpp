// Twist-family context: the curve y^2 = (x-a1)(x-a2)(x-a3) with full rational
// 2-torsion, the quadratic field K = Q(sqrt(theta)), the bad set Sigma, and
// the induced partition of primes into Sigma / P0 / P1 / P2.
#pragma once

#include <array>

#include "selk/numtheory.hpp"

namespace selk::curve {

using numtheory::DomainError;
using numtheory::Factorization;
using numtheory::i64;
using numtheory::SquarefreeInt;

enum class SplitType { Split, Inert, Ramified };

// Behaviour of a prime p in Q(sqrt(theta)); theta squarefree, != 0, 1.
SplitType classify_in_K(i64 p, i64 theta);

enum class PrimeClass { Sigma, P0, P1, P2 };

struct CurveData {
  i64 a1, a2, a3;
  i64 alpha, beta, gamma;  // a1-a2, a1-a3, a2-a3; beta = alpha + gamma
  i64 theta;               // K = Q(sqrt(theta))
  std::vector<i64> sigma;  // finite primes of Sigma, increasing; the real place is implicit
  i64 N;                   // product of the finite primes of Sigma

  bool in_sigma(i64 p) const;
};

// Sigma is taken minimal: {oo, 2} plus primes ramified in K plus primes of bad
// reduction (divisors of alpha*beta*gamma). This makes N canonical.
CurveData make_curve(i64 a1, i64 a2, i64 a3, i64 theta);

// Partition class of p for the fixed (curve, theta). When alpha*beta is a
// rational square P0 is empty and every good split prime lands in P1.
PrimeClass prime_class(i64 p, const CurveData& curve);

struct TwistDecomposition {
  i64 a;           // signed Sigma-part, a | N
  i64 d0, d1, d2;  // positive, prime support in P0 / P1 / P2
  std::vector<i64> p0, p1, p2;  // the primes of d0, d1, d2, increasing

  i64 d_prime() const { return d0 * d1; }   // d'
  i64 d_dprime() const { return d2; }       // d''
};

// Unique decomposition d = a*d0*d1*d2 of a squarefree integer.
TwistDecomposition twist_decompose(const SquarefreeInt& d, const CurveData& curve);
TwistDecomposition twist_decompose(i64 d, const CurveData& curve);

// omega_{E,K}(d): primes p | d outside Sigma, inert in K, with full local
// 2-torsion. With E[2] rational that is just the number of P2-divisors.
int omega_EK(const SquarefreeInt& d, const CurveData& curve);
int omega_EK(i64 d, const CurveData& curve);

}  // namespace selk::curve
