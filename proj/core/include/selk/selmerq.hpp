// Global auxiliary Selmer groups over Q for a twist E_d:
//
//   Sel_{C~_d}  — pairs (x1, x2) of signed squarefree divisors of N d'
//                 cut out by unramified/torsion-image conditions,
//   S_d         — the decoupled one-variable group whose triviality forces
//                 triviality of Sel_{C~_d},
//
// plus the surrogate g, the predicted 2-Selmer dimension over K, and the
// Erdos-Kac normalization. Membership conditions are quadratic characters,
// so both groups are kernels of F2-linear systems on exponent vectors; the
// divisor-enumeration definition stays in the tests as the oracle.
#pragma once

#include <cmath>
#include <optional>

#include "selk/curve.hpp"
#include "selk/f2lin.hpp"
#include "selk/localdescent.hpp"

namespace selk::selmerq {

using curve::CurveData;
using curve::TwistDecomposition;
using numtheory::DomainError;
using numtheory::i64;
using numtheory::SquarefreeInt;

// Exponent basis {-1} u primes(N) u primes(d') for signed squarefree
// divisors of N d'.
struct GlobalClassBasis {
  std::vector<i64> labels;  // labels[0] = -1, then primes, increasing

  int size() const { return static_cast<int>(labels.size()); }
  i64 to_int(std::uint64_t mask) const;
  // Exponent mask of a signed squarefree x supported on the basis.
  std::uint64_t to_mask(i64 x) const;
};

GlobalClassBasis divisor_basis(const CurveData& c, const TwistDecomposition& t);

struct SdGroup {
  GlobalClassBasis basis;
  f2lin::F2Subspace space;  // subgroup of the exponent space

  int dim() const { return space.dim(); }
  std::uint64_t size() const { return 1ull << space.dim(); }
  bool contains(i64 x) const;
  std::vector<i64> members() const;
};

struct SelCtildeGroup {
  GlobalClassBasis basis;       // per coordinate
  f2lin::F2Subspace space;      // pair space, first coordinate in the low bits

  int dim() const { return space.dim(); }
  std::vector<std::pair<i64, i64>> members() const;
  bool trivial() const { return space.dim() == 0; }
};

// Sel_{C~_d}(Q, E_d[2]) as a subgroup of pairs of squarefree integers.
SelCtildeGroup sel_Ctilde(const CurveData& c, const SquarefreeInt& d);
SelCtildeGroup sel_Ctilde(const CurveData& c, i64 d);

// S_d = {x squarefree signed : x | N d0 d1, (x/p)=1 for p|d2, (x,d alpha)_p=1 for p|d1}.
SdGroup S_d_group(const CurveData& c, const SquarefreeInt& d);
SdGroup S_d_group(const CurveData& c, i64 d);

// Every member of Sel_{C~_d} has first coordinate in S_d; this checks it.
bool containment_check(const CurveData& c, i64 d);

// 2 omega_{E,K}(d), the local-sum surrogate for g(d).
int g_surrogate(const CurveData& c, i64 d);

// When Sel_{C~_d} = 0 the dimension formula applies: g(d) - 2. Otherwise no
// prediction is made.
std::optional<int> predicted_dim_selK(const localdescent::Context& ctx, i64 d);

// (dim - loglog|d|) / sqrt(2 loglog|d|); requires |d| >= 3.
double ek_statistic(i64 d, int dim);

}  // namespace selk::selmerq
