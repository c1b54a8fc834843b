// Local 2-descent data for quadratic twists E_d at every place of Q:
// square-class coordinates, Kummer images, the local Tate pairing, the local
// conditions C_v = S(E_d/Q_v) ∩ S(E_{d theta}/Q_v), norm-map cokernel
// dimensions, and the exact local sum g(d).
//
// Good places use closed forms. Places in Sigma fall back to an exhaustive
// two-covering solubility test; those images depend on d only through its
// local square class and are precomputed per class in Context, so sweeps
// never re-run the search.
#pragma once

#include <map>
#include <optional>

#include "selk/curve.hpp"
#include "selk/f2lin.hpp"
#include "selk/numtheory.hpp"

namespace selk::localdescent {

using curve::CurveData;
using f2lin::F2Pairing;
using f2lin::F2Subspace;
using numtheory::DomainError;
using numtheory::i64;
using numtheory::Place;
using numtheory::real_place;

// Raised when the lifting search at a bad place runs out of certified depth;
// callers may retry with more precision.
struct PrecisionExhausted : std::runtime_error {
  i64 p;
  int precision;
  PrecisionExhausted(i64 p_, int k)
      : std::runtime_error("local solubility search inconclusive at p=" + std::to_string(p_) +
                           " with precision " + std::to_string(k)),
        p(p_),
        precision(k) {}
};

// Q_v^x / Q_v^{x2} with a fixed labeled basis:
//   odd p : {u_p, p}        (u_p = least quadratic non-residue), dim 2
//   p = 2 : {-1, 2, 5}      dim 3
//   real  : {-1}            dim 1
struct LocalSquareClassSpace {
  Place place;
  i64 u_p = 0;  // least non-residue for odd p, else unused

  static LocalSquareClassSpace at(Place v);
  int dim() const;
  // Coordinates of a nonzero integer in the chosen basis.
  std::uint64_t coords(i64 a) const;
  // An integer representative of a coordinate mask.
  i64 rep(std::uint64_t bits) const;
};

// Element of (Q_v^x/Q_v^{x2})^2; first coordinate in the low dim() bits.
struct LocalPairClass {
  Place place;
  std::uint64_t bits = 0;

  LocalPairClass mul(const LocalPairClass& o) const {
    if (!(place == o.place)) throw DomainError("LocalPairClass: mixed places");
    return {place, bits ^ o.bits};
  }
  bool operator==(const LocalPairClass&) const = default;
};

int pair_ambient_dim(Place v);

LocalPairClass pair_class(const CurveData& c, i64 x1, i64 x2, Place v);

// Images of the three 2-torsion points of E_d under the Kummer map at v.
// delta(P1) = (alpha*beta, d*alpha), delta(P2) = (-d*alpha, -alpha*gamma),
// delta(P3) = delta(P1)*delta(P2).
std::array<LocalPairClass, 3> two_torsion_image(const CurveData& c, i64 d, Place v);

// Local Tate pairing ((x1,x2),(y1,y2)) -> (x1,y2)_v (x2,y1)_v.
int local_tate_pair(const LocalPairClass& x, const LocalPairClass& y);

// Gram matrix of the local Tate pairing over the pair-class basis at v.
F2Pairing tate_gram(Place v);

// Local solubility of the two-covering attached to the class (b1, b2) of
// E_d at a finite place v of Sigma:
//   b1 z1^2 - b2 z2^2    = -d alpha w^2
//   b1 z1^2 - b1 b2 z3^2 = -d beta  w^2
// decided by lifting over Z/p^k with smooth-point certification.
bool torsor_locally_solvable(const CurveData& c, i64 d, i64 b1, i64 b2, Place v);

// Precomputed bad-place Kummer images, keyed by the local square class of the
// twist. Immutable after construction; safe to share across threads.
class Context {
 public:
  explicit Context(CurveData curve);

  const CurveData& curve() const { return curve_; }

  // S(E_d/Q_v) as a subspace of the pair-class space at v.
  F2Subspace local_kummer_image(i64 d, Place v) const;

  // dim E_d(Q_v)/N E_d(K_w); 0 immediately when v splits in K.
  int norm_coker_dim(i64 d, Place v) const;

  // g(d) = sum over v in Sigma and p | d of the norm cokernel dimension.
  int g_exact(i64 d) const;

 private:
  F2Subspace image_by_search(i64 d_rep, Place v) const;

  CurveData curve_;
  // bad_images_[i][class bits] = image at sigma prime i for that twist class.
  std::vector<std::vector<F2Subspace>> bad_images_;
};

// Expected dim of S(E_d/Q_v): half the ambient pair dimension.
int expected_kummer_dim(Place v);

}  // namespace selk::localdescent
