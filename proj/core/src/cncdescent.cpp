#include "selk/cncdescent.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace selk::cncdescent {

using numtheory::is_prime;
using numtheory::legendre;
using numtheory::u64;

bool admissible_theta(i64 theta) {
  return theta == -3 || theta == -11 || theta == -19 || theta == -43 || theta == -67 ||
         theta == -163;
}

ImagQuadRing::ImagQuadRing(i64 theta_) : theta(theta_) {
  if (!admissible_theta(theta)) throw DomainError("ImagQuadRing: theta must be one of the six class-number-1 fields with 2 inert");
}

namespace {

i64 isqrt64(i64 n) {
  if (n < 0) return -1;
  i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

std::optional<QuadInt> split_prime(i64 p, i64 theta) {
  ImagQuadRing ring(theta);
  if (p <= 0 || !is_prime(static_cast<u64>(p))) throw DomainError("split_prime: p must be a prime");
  if (p == 2 || theta % p == 0) throw DomainError("split_prime: p must be coprime to 2 theta");
  if (numtheory::kronecker(theta, p) != 1) return std::nullopt;
  i64 at = -theta;
  for (i64 b = 1; at * b * b <= 4 * p; ++b) {
    i64 t = 4 * p - at * b * b;
    i64 a = isqrt64(t);
    if (a > 0 && a * a == t) {
      assert(((a - b) & 1) == 0);
      QuadInt eps{(a - b) / 2, b};
      assert(ring.norm(eps) == p);
      return eps;
    }
  }
  throw std::logic_error("split_prime: split prime without a norm representation");
}

// --- K_2 model -----------------------------------------------------------

namespace {

// Multiplication in Z[zeta]/8, zeta^2 = -1 - zeta.
std::pair<int, int> mul8(std::pair<int, int> x, std::pair<int, int> y) {
  int a0 = x.first, a1 = x.second, b0 = y.first, b1 = y.second;
  int c0 = a0 * b0 - a1 * b1;
  int c1 = a0 * b1 + a1 * b0 - a1 * b1;
  return {((c0 % 8) + 8) % 8, ((c1 % 8) + 8) % 8};
}

bool unit8(int c0, int c1) { return (c0 & 1) || (c1 & 1); }

struct ZZeta {
  i64 a0 = 0, a1 = 0;  // a0 + a1 zeta
  ZZeta operator*(const ZZeta& o) const {
    return {a0 * o.a0 - a1 * o.a1, a0 * o.a1 + a1 * o.a0 - a1 * o.a1};
  }
  ZZeta operator-(const ZZeta& o) const { return {a0 - o.a0, a1 - o.a1}; }
};

}  // namespace

const K2ClassSpace& K2ClassSpace::instance() {
  static K2ClassSpace k2;
  return k2;
}

int K2ClassSpace::unit_log(int c0, int c1) const { return unit_log_[c0][c1]; }

K2ClassSpace::K2ClassSpace() {
  // Unit square residues mod 8 (Hensel: a unit is a square iff square mod 8).
  std::array<std::array<bool, 8>, 8> sq{};
  for (int a0 = 0; a0 < 8; ++a0)
    for (int a1 = 0; a1 < 8; ++a1) {
      if (!unit8(a0, a1)) continue;
      auto s = mul8({a0, a1}, {a0, a1});
      sq[s.first][s.second] = true;
    }

  // Coset ids of units modulo squares; canonical rep = smallest (c0, c1).
  std::array<std::array<int, 8>, 8> coset{};
  for (auto& row : coset) row.fill(-1);
  std::vector<std::pair<int, int>> reps;
  for (int c0 = 0; c0 < 8; ++c0)
    for (int c1 = 0; c1 < 8; ++c1) {
      if (!unit8(c0, c1) || coset[c0][c1] != -1) continue;
      int id = static_cast<int>(reps.size());
      reps.push_back({c0, c1});
      // Mark the whole coset u * (squares).
      for (int s0 = 0; s0 < 8; ++s0)
        for (int s1 = 0; s1 < 8; ++s1) {
          if (!sq[s0][s1]) continue;
          auto e = mul8({c0, c1}, {s0, s1});
          coset[e.first][e.second] = id;
        }
    }
  assert(reps.size() == 8);  // unit part has dimension 3

  // Assign 3-bit coordinates to the quotient group by greedy generation.
  std::vector<int> logs(reps.size(), -1);
  int trivial = coset[1][0];
  logs[trivial] = 0;
  std::vector<int> have{trivial};
  int bit = 0;
  for (std::size_t g = 0; g < reps.size(); ++g) {
    if (logs[g] != -1) continue;
    int gbit = 1 << bit++;
    std::vector<int> fresh;
    for (int h : have) {
      auto e = mul8(reps[g], reps[h]);
      int idx = coset[e.first][e.second];
      assert(logs[idx] == -1);
      logs[idx] = logs[h] | gbit;
      fresh.push_back(idx);
    }
    for (int h : fresh) have.push_back(h);
  }
  assert(bit == 3);
  for (int c0 = 0; c0 < 8; ++c0)
    for (int c1 = 0; c1 < 8; ++c1)
      unit_log_[c0][c1] = unit8(c0, c1) ? logs[coset[c0][c1]] : -1;

  // Hilbert symbols via norm groups: (a,b) = +1 iff a is a norm from
  // K_2(sqrt(b)). Norm classes of x^2 - b y^2 are collected until the
  // index-2 subgroup (dimension 3 of 4) is complete.
  for (int bcls = 0; bcls < 16; ++bcls) {
    if (bcls == 0) {
      for (int a = 0; a < 16; ++a) hilbert_[a][bcls] = 1;
      continue;
    }
    // Exact lift of the class: canonical unit rep times 2^(valuation bit).
    std::pair<int, int> urep{-1, -1};
    for (int c0 = 0; c0 < 8 && urep.first < 0; ++c0)
      for (int c1 = 0; c1 < 8; ++c1)
        if (unit8(c0, c1) && unit_log_[c0][c1] == (bcls & 7)) {
          urep = {c0, c1};
          break;
        }
    ZZeta bhat{urep.first, urep.second};
    if (bcls & 8) bhat = {2 * bhat.a0, 2 * bhat.a1};

    f2lin::F2Subspace norms(4);
    for (i64 x0 = -15; x0 <= 16 && norms.dim() < 3; ++x0)
      for (i64 x1 = -15; x1 <= 16 && norms.dim() < 3; ++x1)
        for (i64 y0 = -15; y0 <= 16 && norms.dim() < 3; ++y0)
          for (i64 y1 = -15; y1 <= 16 && norms.dim() < 3; ++y1) {
            ZZeta x{x0, x1}, y{y0, y1};
            ZZeta val = x * x - bhat * (y * y);
            if (val.a0 == 0 && val.a1 == 0) continue;
            norms.insert(coords(val.a0, val.a1));
          }
    if (norms.dim() != 3) throw std::logic_error("K2 norm group generation incomplete");
    for (int a = 0; a < 16; ++a)
      hilbert_[a][bcls] = norms.contains(static_cast<std::uint64_t>(a)) ? 1 : -1;
  }
  for (int a = 0; a < 16; ++a)
    for (int b = 0; b < 16; ++b) assert(hilbert_[a][b] == hilbert_[b][a]);
}

std::uint64_t K2ClassSpace::coords(i64 x0, i64 x1) const {
  if (x0 == 0 && x1 == 0) throw DomainError("K2ClassSpace: zero element");
  int v = 0;
  while ((x0 % 2 == 0) && (x1 % 2 == 0)) {
    x0 /= 2;
    x1 /= 2;
    ++v;
  }
  int c0 = static_cast<int>(((x0 % 8) + 8) % 8);
  int c1 = static_cast<int>(((x1 % 8) + 8) % 8);
  std::uint64_t m = static_cast<std::uint64_t>(unit_log_[c0][c1]);
  if (v & 1) m |= 8;
  return m;
}

int K2ClassSpace::hilbert(std::uint64_t a, std::uint64_t b) const {
  return hilbert_[a & 15][b & 15];
}

F2Pairing K2ClassSpace::pair_gram() const {
  // Pairing ((x1,x2),(y1,y2)) = (x1,y2)(x2,y1) on the 8-bit pair space.
  F2Pairing g{8, std::vector<std::uint64_t>(8, 0)};
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      std::uint64_t xi = 1ull << i, xj = 1ull << j;
      std::uint64_t x1 = xi & 15, x2 = (xi >> 4) & 15;
      std::uint64_t y1 = xj & 15, y2 = (xj >> 4) & 15;
      if (hilbert(x1, y2) * hilbert(x2, y1) == -1) g.gram[i] |= (1ull << j);
    }
  return g;
}

K2Residue omega_image_mod8(i64 theta) {
  if (!admissible_theta(theta)) throw DomainError("omega_image_mod8: inadmissible theta");
  // sqrt(theta) = (1 + 2 zeta) s with s in Z_2, s^2 = theta / -3; s is pinned
  // mod 16 by s^2 mod 32 together with s = 1 or 3 mod 8.
  i64 target = (((-theta) % 32) * 11) % 32;  // |theta|/3 mod 32 (3^-1 = 11)
  int s = -1;
  for (int c = 1; c < 32; c += 2) {
    if ((c * c) % 32 == target && (c % 8 == 1 || c % 8 == 3)) {
      s = c % 16;
      break;
    }
  }
  if (s < 0) throw std::logic_error("omega_image_mod8: no 2-adic square root");
  // omega = (1 + sqrt(theta))/2 -> (1+s)/2 + s zeta.
  return {((1 + s) / 2) % 8, s % 8};
}

std::uint64_t k2_class_of(const ImagQuadRing& ring, QuadInt z) {
  if (z.a == 0 && z.b == 0) throw DomainError("k2_class_of: zero element");
  int v = 0;
  while ((z.a % 2 == 0) && (z.b % 2 == 0)) {
    z.a /= 2;
    z.b /= 2;
    ++v;
  }
  K2Residue w = omega_image_mod8(ring.theta);
  // Unit part maps through omega -> w.c0 + w.c1 zeta; it stays a unit mod 8.
  i64 c0 = ((z.a + z.b * w.c0) % 8 + 8) % 8;
  i64 c1 = ((z.b * w.c1) % 8 + 8) % 8;
  std::uint64_t cls = K2ClassSpace::instance().coords(c0, c1);
  if (v & 1) cls ^= 8;
  return cls;
}

// --- local images ---------------------------------------------------------

namespace {

// Q_p-style coordinates (split completions and good places):
// bit 0 = nonresidue flag of the unit part, bit 1 = valuation parity.
std::uint64_t qp_coords(i64 n, i64 p) {
  int v = numtheory::valuation(n, p);
  i64 u = n;
  for (int i = 0; i < v; ++i) u /= p;
  std::uint64_t m = 0;
  if (legendre(u, p) == -1) m |= 1;
  if (v & 1) m |= 2;
  return m;
}

}  // namespace

F2Subspace local_images_cnc(i64 p, i64 theta, PlaceCNC v) {
  if (!admissible_theta(theta)) throw DomainError("local_images_cnc: inadmissible theta");
  switch (v.kind) {
    case PlaceCNC::Archimedean:
      return F2Subspace(0);
    case PlaceCNC::GoodFinite: {
      F2Subspace s(4);
      s.insert(1ull << 0);  // (u, 1)
      s.insert(1ull << 2);  // (1, u)
      return s;
    }
    case PlaceCNC::OverSplit:
    case PlaceCNC::OverSplitBar: {
      F2Subspace s(4);
      s.insert(qp_coords(-1, p) | (qp_coords(-p, p) << 2));
      s.insert(qp_coords(p, p) | (qp_coords(2, p) << 2));
      return s;
    }
    case PlaceCNC::OverInert: {
      // Rational units are squares in the unramified quadratic extension.
      F2Subspace s(4);
      s.insert(2ull << 2);  // (-1, -p) ~ (1, p)
      s.insert(2ull);       // (p, 2) ~ (p, 1)
      return s;
    }
    case PlaceCNC::Two: {
      const auto& k2 = K2ClassSpace::instance();
      F2Subspace s(8);
      std::uint64_t t1 = k2.coords_rational(-1) | (k2.coords_rational(-p) << 4);
      std::uint64_t t2 = k2.coords_rational(2) << 4;
      std::uint64_t t3 = k2.coords(3, 1) | (k2.coords(3 + 3 * p, 1) << 4);
      std::uint64_t t4 = k2.coords(5, 4) << 4;
      s.insert(t1);
      s.insert(t2);
      s.insert(t3);
      s.insert(t4);
      return s;
    }
  }
  throw DomainError("local_images_cnc: unknown place");
}

bool epsilon_square_test(i64 p, i64 theta) {
  if (p % 8 != 1) throw DomainError("epsilon_square_test: requires p = 1 mod 8");
  auto eps = split_prime(p, theta);
  if (!eps) throw DomainError("epsilon_square_test: requires p split in K");
  // Image of epsbar in O_K/(eps) = F_p is 2a + b for eps = a + b omega.
  i64 r = ((2 * eps->a + eps->b) % p + p) % p;
  return legendre(r, p) == 1;
}

std::pair<int, int> classify_prime_cnc(i64 p, i64 theta) {
  auto eps = split_prime(p, theta);  // validates p
  if (!eps) return {4, 0};
  switch (p % 8) {
    case 5:
    case 7:
      return {2, 1};
    case 3:
      return {2, 0};
    default:
      return epsilon_square_test(p, theta) ? std::pair<int, int>{2, 2}
                                           : std::pair<int, int>{4, 0};
  }
}

std::pair<int, int> gmodule_decompose(const F2Subspace& subspace,
                                      const std::vector<std::uint64_t>& sigma) {
  int n = subspace.ambient();
  if (static_cast<int>(sigma.size()) != n)
    throw DomainError("gmodule_decompose: sigma has wrong dimension");
  auto apply = [&](std::uint64_t m) {
    std::uint64_t r = 0;
    for (int i = 0; i < n; ++i)
      if ((m >> i) & 1) r ^= sigma[i];
    return r;
  };
  for (int i = 0; i < n; ++i)
    if (apply(sigma[i]) != (1ull << i)) throw DomainError("gmodule_decompose: sigma is not an involution");
  for (auto r : subspace.rows())
    if (!subspace.contains(apply(r))) throw DomainError("gmodule_decompose: sigma does not preserve the subspace");
  F2Subspace img(n);
  for (auto r : subspace.rows()) img.insert(apply(r) ^ r);
  int e2 = img.dim();
  int e1 = subspace.dim() - 2 * e2;
  assert(e1 >= 0);
  return {e1, e2};
}

SelmerGModule descend_cnc(i64 p, i64 theta) {
  ImagQuadRing ring(theta);
  auto eps = split_prime(p, theta);
  const auto& k2 = K2ClassSpace::instance();
  F2Subspace at2 = local_images_cnc(p, theta, {PlaceCNC::Two});

  SelmerGModule out;
  if (!eps) {
    // Supports {-1, 2, p} in each coordinate.
    out.basis_labels = {"-1", "2", "p"};
    std::array<std::uint64_t, 3> col2{k2.coords_rational(-1), k2.coords_rational(2),
                                      k2.coords_rational(p)};
    std::array<std::uint64_t, 3> colp{0, 0, 2};  // at the inert place only v_p survives
    F2Subspace atp = local_images_cnc(p, theta, {PlaceCNC::OverInert});
    F2Subspace members(6);
    for (std::uint64_t m = 0; m < 64; ++m) {
      std::uint64_t loc2 = 0, locp = 0;
      for (int i = 0; i < 3; ++i) {
        if ((m >> i) & 1) loc2 ^= col2[i], locp ^= colp[i];
        if ((m >> (i + 3)) & 1) loc2 ^= col2[i] << 4, locp ^= colp[i] << 2;
      }
      if (at2.contains(loc2) && atp.contains(locp)) members.insert(m);
    }
    out.subspace = std::move(members);
    out.sigma = {1, 2, 4, 8, 16, 32};  // trivial action on rational supports
  } else {
    out.basis_labels = {"-1", "2", "eps", "epsbar"};
    QuadInt e = *eps, ebar = ring.conj(e);
    std::array<std::uint64_t, 4> col2{k2.coords_rational(-1), k2.coords_rational(2),
                                      k2_class_of(ring, e), k2_class_of(ring, ebar)};
    // At the split completions K_eps = K_epsbar = Q_p. The conjugate prime
    // element reduces to 2a + b in the residue field.
    std::uint64_t f_m1 = legendre(-1, p) == -1 ? 1 : 0;
    std::uint64_t f_2 = legendre(2, p) == -1 ? 1 : 0;
    i64 r = ((2 * e.a + e.b) % p + p) % p;
    std::uint64_t f_conj = legendre(r, p) == -1 ? 1 : 0;
    std::array<std::uint64_t, 4> coleps{f_m1, f_2, f_conj | 2, f_conj};
    std::array<std::uint64_t, 4> colebar{f_m1, f_2, f_conj, f_conj | 2};
    F2Subspace ateps = local_images_cnc(p, theta, {PlaceCNC::OverSplit});
    F2Subspace members(8);
    for (std::uint64_t m = 0; m < 256; ++m) {
      std::uint64_t loc2 = 0, le = 0, lb = 0;
      for (int i = 0; i < 4; ++i) {
        if ((m >> i) & 1) loc2 ^= col2[i], le ^= coleps[i], lb ^= colebar[i];
        if ((m >> (i + 4)) & 1) loc2 ^= col2[i] << 4, le ^= coleps[i] << 2, lb ^= colebar[i] << 2;
      }
      if (at2.contains(loc2) && ateps.contains(le) && ateps.contains(lb)) members.insert(m);
    }
    out.subspace = std::move(members);
    // sigma swaps eps and epsbar in both coordinates.
    out.sigma = {1, 2, 8, 4, 16, 32, 128, 64};
  }
  auto [e1, e2] = gmodule_decompose(out.subspace, out.sigma);
  out.e1 = e1;
  out.e2 = e2;
  return out;
}

double DensityTable::proportion(int e1, int e2) const {
  auto it = counts.find({e1, e2});
  if (it == counts.end() || total == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(total);
}

DensityTable density_sweep_cnc(i64 theta, i64 x) {
  if (!admissible_theta(theta)) throw DomainError("density_sweep_cnc: inadmissible theta");
  DensityTable t;
  t.theta = theta;
  t.x = x;
  std::vector<bool> comp(static_cast<std::size_t>(x) + 1, false);
  for (i64 i = 2; i * i <= x; ++i)
    if (!comp[i])
      for (i64 j = i * i; j <= x; j += i) comp[j] = true;
  for (i64 p = 3; p <= x; ++p) {
    if (comp[p] || theta % p == 0) continue;
    auto [e1, e2] = classify_prime_cnc(p, theta);
    ++t.total;
    ++t.counts[{e1, e2}];
    if (p % 8 == 1 && numtheory::kronecker(theta, p) == 1) {
      if (epsilon_square_test(p, theta))
        ++t.split_1mod8_square;
      else
        ++t.split_1mod8_nonsquare;
    }
  }
  return t;
}

}  // namespace selk::cncdescent
