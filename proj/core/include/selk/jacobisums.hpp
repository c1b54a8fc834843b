// Character-sum side of the weighted average of #S_d - 1: the 14-symbol
// product J_{eta,lambda}, the sums S_gamma(lambda, eta, X) over coprime
// family-constrained tuples, and the exact finite identity
//
//   sum_{|d|<=X sqfree} gamma^{omega2(d)-omega0(d)} (#S_d - 1)
//     = sum_{a|N} sum_{xN|N} S_gamma(xN, -a xN alpha, X/|a|)
//
// with a, xN over signed divisors of N. Everything is exact rational
// arithmetic; the identity test tolerates nothing.
#pragma once

#include <array>

#include <boost/multiprecision/cpp_int.hpp>

#include "selk/curve.hpp"

namespace selk::jacobisums {

using curve::CurveData;
using numtheory::DomainError;
using numtheory::i64;

using Rational = boost::multiprecision::cpp_rational;

Rational rat_pow(const Rational& base, int e);

// Definitional tables: weight kappa_i, where eta/lambda act (mu_i, nu_i),
// which residue symbols (D_i/D_j) appear (phi), and which family F_{n_i}
// each variable ranges over.
struct JacobiSumSpec {
  Rational gamma;
  i64 lambda = 1;
  i64 eta = 1;

  static constexpr std::array<int, 8> family{0, 0, 1, 1, 1, 1, 2, 2};
  static constexpr std::array<int, 8> mu{0, 0, 1, 0, 0, 0, 0, 0};
  static constexpr std::array<int, 8> nu{0, 0, 0, 0, 1, 0, 1, 0};
  // phi[i][j] = 1 iff (D_i/D_j) appears in J.
  static std::array<std::array<int, 8>, 8> phi();

  Rational kappa(int i) const;
  static bool linked(int i, int j);
};

JacobiSumSpec make_spec(Rational gamma, i64 lambda, i64 eta);

// The product of the 14 Jacobi symbols, exactly as printed.
int J_term(i64 eta, i64 lambda, const std::array<i64, 8>& D);

// S_gamma(lambda, eta, X): weighted sum over admissible coprime tuples with
// prod D_i <= X, D_i in F_{family[i]}; when lambda = 1 the all-ones corner
// D0 = D2 = D3 = 1 is excluded.
Rational S_gamma(const CurveData& c, const JacobiSumSpec& spec, const Rational& X);

// Left side of the identity: sum over squarefree |d| <= X.
Rational lhs_weighted_average(const CurveData& c, const Rational& gamma, const Rational& X);

struct IdentityReport {
  Rational lhs, rhs;
  bool equal;
};

IdentityReport verify_identity(const CurveData& c, const Rational& gamma, const Rational& X);

}  // namespace selk::jacobisums
