// Exact 2-descent for prime twists E_p of the congruent number curve
// y^2 = x^3 - x over K = Q(sqrt(theta)), theta in {-3,-11,-19,-43,-67,-163}
// (class number 1, 2 inert). Two independent routes are provided:
//
//   descend_cnc        — enumerates candidate global classes with support in
//                        {-1, 2, p} (inert) or {-1, 2, eps, epsbar} (split)
//                        and keeps those passing the local conditions at 2
//                        and above p; returns the group with its G-action.
//   classify_prime_cnc — the closed-form (e1, e2) classification, using the
//                        residue-field square test for epsbar when p = 1 mod 8.
//
// K_2 = Q_2(zeta) is modelled exactly: units are squares iff squares mod 8,
// so classes live in (valuation parity, unit class in (Z[zeta]/8)^x mod
// squares), and K_2 Hilbert symbols are read off precomputed norm groups.
#pragma once

#include <map>
#include <optional>
#include <string>

#include "selk/f2lin.hpp"
#include "selk/numtheory.hpp"

namespace selk::cncdescent {

using f2lin::F2Pairing;
using f2lin::F2Subspace;
using numtheory::DomainError;
using numtheory::i64;

bool admissible_theta(i64 theta);

// Element a + b*omega of O_K, omega = (1 + sqrt(theta))/2.
struct QuadInt {
  i64 a = 0, b = 0;
  bool operator==(const QuadInt&) const = default;
};

struct ImagQuadRing {
  i64 theta;

  explicit ImagQuadRing(i64 theta_);
  i64 c() const { return (1 - theta) / 4; }  // omega^2 = omega - c
  i64 norm(QuadInt z) const { return z.a * z.a + z.a * z.b + z.b * z.b * c(); }
  QuadInt conj(QuadInt z) const { return {z.a + z.b, -z.b}; }
  QuadInt mul(QuadInt x, QuadInt y) const {
    return {x.a * y.a - x.b * y.b * c(), x.a * y.b + x.b * y.a + x.b * y.b};
  }
};

// For p not dividing 2 theta: a canonical eps with norm(eps) = p when p
// splits (smallest b > 0, a > 0 in 4p = a^2 + |theta| b^2), nullopt if inert.
std::optional<QuadInt> split_prime(i64 p, i64 theta);

// --- K_2 = Q_2(zeta) ---------------------------------------------------

// Residue c0 + c1*zeta mod 8.
struct K2Residue {
  int c0 = 0, c1 = 0;
};

// Square-class coordinates in K_2^x/K_2^{x2}: bits 0..2 unit class, bit 3
// valuation parity. The pair space (K_2^x/K_2^{x2})^2 has dimension 8.
class K2ClassSpace {
 public:
  static const K2ClassSpace& instance();

  static constexpr int kDim = 4;

  // Class of an exact nonzero element x0 + x1*zeta of Z[zeta].
  std::uint64_t coords(i64 x0, i64 x1) const;
  std::uint64_t coords_rational(i64 n) const { return coords(n, 0); }
  bool is_square(i64 x0, i64 x1) const { return coords(x0, x1) == 0; }

  // Hilbert symbol on square classes.
  int hilbert(std::uint64_t a, std::uint64_t b) const;
  // Gram matrix of the Tate pairing on the 8-dimensional pair space.
  F2Pairing pair_gram() const;

 private:
  K2ClassSpace();
  int unit_log(int c0, int c1) const;  // 3-bit class of a unit residue

  std::array<std::array<int, 8>, 8> unit_log_{};  // indexed by residues mod 8
  std::array<std::array<int, 16>, 16> hilbert_{};  // by 4-bit class coords
};

// Embedding O_K -> Z_2[zeta]: the image of omega mod 8, from the canonical
// 2-adic square root of theta/(-3).
K2Residue omega_image_mod8(i64 theta);
// Class in K_2 of a + b*omega (exact valuation, residue via the embedding).
std::uint64_t k2_class_of(const ImagQuadRing& ring, QuadInt z);

// --- Local images and the descent --------------------------------------

// Place of K relevant to a prime twist.
struct PlaceCNC {
  enum Kind { Archimedean, Two, OverSplit, OverSplitBar, OverInert, GoodFinite } kind;
};

// The local Kummer image of E_p/K at v, in the local pair coordinates:
//   Archimedean: 0 (ambient dim 0)
//   GoodFinite (v coprime to 2p): <(1,u),(u,1)> with u a nonsquare unit
//   OverSplit/OverInert: <(-1,-p),(p,2)>
//   Two: <T1,T2,T3,T4>, T3 = (zeta+3, zeta+3(1+p)), T4 = (1, 4zeta+5)
F2Subspace local_images_cnc(i64 p, i64 theta, PlaceCNC v);

// Whether epsbar is a square in K_eps (= Q_p), via quadratic residuosity of
// its image in O_K/(eps). Requires p = 1 mod 8, split, p coprime to 2 theta.
bool epsilon_square_test(i64 p, i64 theta);

// Closed-form classification (e1, e2) of Sel^2(E_p/K) = F2^{e1} + F2[G]^{e2}.
std::pair<int, int> classify_prime_cnc(i64 p, i64 theta);

struct SelmerGModule {
  F2Subspace subspace;                   // over the exponent basis below
  std::vector<std::string> basis_labels; // one coordinate block, repeated twice
  std::vector<std::uint64_t> sigma;      // involution: sigma[i] = image of e_i
  int e1 = 0, e2 = 0;

  int dim() const { return subspace.dim(); }
};

// Full enumeration descent; independent of classify_prime_cnc.
SelmerGModule descend_cnc(i64 p, i64 theta);

// e2 = rank(sigma - 1) on the subspace, e1 = dim - 2 e2. Throws if sigma is
// not an involution preserving the subspace.
std::pair<int, int> gmodule_decompose(const F2Subspace& subspace,
                                      const std::vector<std::uint64_t>& sigma);

struct DensityTable {
  i64 theta;
  i64 x;
  long long total = 0;                      // primes counted (p coprime to 2 theta)
  std::map<std::pair<int, int>, long long> counts;
  long long split_1mod8_square = 0;         // eps-test true among split p = 1 mod 8
  long long split_1mod8_nonsquare = 0;

  double proportion(int e1, int e2) const;
};

DensityTable density_sweep_cnc(i64 theta, i64 x);

}  // namespace selk::cncdescent
