#include "selk/localdescent.hpp"

#include <cassert>

namespace selk::localdescent {

using numtheory::hilbert;
using numtheory::legendre;
using numtheory::squarefree_part;
using numtheory::valuation;

LocalSquareClassSpace LocalSquareClassSpace::at(Place v) {
  LocalSquareClassSpace s{v, 0};
  if (!v.is_real() && v.p != 2) {
    for (i64 u = 2;; ++u) {
      if (legendre(u, v.p) == -1) {
        s.u_p = u;
        break;
      }
    }
  }
  return s;
}

int LocalSquareClassSpace::dim() const {
  if (place.is_real()) return 1;
  return place.p == 2 ? 3 : 2;
}

std::uint64_t LocalSquareClassSpace::coords(i64 a) const {
  if (a == 0) throw DomainError("LocalSquareClassSpace: zero has no square class");
  if (place.is_real()) return a < 0 ? 1 : 0;
  if (place.p == 2) {
    int e = valuation(a, 2);
    i64 u = a >> e;
    i64 r = ((u % 8) + 8) % 8;
    std::uint64_t m = 0;
    if (r == 3 || r == 7) m |= 1;  // -1 component
    if (e & 1) m |= 2;             // 2 component
    if (r == 3 || r == 5) m |= 4;  // 5 component
    return m;
  }
  i64 p = place.p;
  int e = valuation(a, p);
  i64 u = a;
  for (int i = 0; i < e; ++i) u /= p;
  std::uint64_t m = 0;
  if (legendre(u, p) == -1) m |= 1;  // u_p component
  if (e & 1) m |= 2;                 // p component
  return m;
}

i64 LocalSquareClassSpace::rep(std::uint64_t bits) const {
  if (place.is_real()) return (bits & 1) ? -1 : 1;
  if (place.p == 2) {
    i64 r = 1;
    if (bits & 1) r = -r;
    if (bits & 2) r *= 2;
    if (bits & 4) r *= 5;
    return r;
  }
  i64 r = 1;
  if (bits & 1) r *= u_p;
  if (bits & 2) r *= place.p;
  return r;
}

int pair_ambient_dim(Place v) { return 2 * LocalSquareClassSpace::at(v).dim(); }

LocalPairClass pair_class(const CurveData&, i64 x1, i64 x2, Place v) {
  auto sp = LocalSquareClassSpace::at(v);
  return {v, sp.coords(x1) | (sp.coords(x2) << sp.dim())};
}

std::array<LocalPairClass, 3> two_torsion_image(const CurveData& c, i64 d, Place v) {
  LocalPairClass d1 = pair_class(c, c.alpha * c.beta, d * c.alpha, v);
  LocalPairClass d2 = pair_class(c, -d * c.alpha, -c.alpha * c.gamma, v);
  return {d1, d2, d1.mul(d2)};
}

int local_tate_pair(const LocalPairClass& x, const LocalPairClass& y) {
  if (!(x.place == y.place)) throw DomainError("local_tate_pair: mixed places");
  auto sp = LocalSquareClassSpace::at(x.place);
  int m = sp.dim();
  std::uint64_t lo = (1ull << m) - 1;
  i64 x1 = sp.rep(x.bits & lo), x2 = sp.rep(x.bits >> m);
  i64 y1 = sp.rep(y.bits & lo), y2 = sp.rep(y.bits >> m);
  return hilbert(x1, y2, x.place) * hilbert(x2, y1, x.place);
}

F2Pairing tate_gram(Place v) {
  int n = pair_ambient_dim(v);
  F2Pairing g{n, std::vector<std::uint64_t>(n, 0)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      LocalPairClass ei{v, 1ull << i}, ej{v, 1ull << j};
      if (local_tate_pair(ei, ej) == -1) g.gram[i] |= (1ull << j);
    }
  }
  return g;
}

int expected_kummer_dim(Place v) {
  if (v.is_real()) return 1;
  return v.p == 2 ? 3 : 2;
}

// ---------------------------------------------------------------------------
// Two-covering local solubility by digit-by-digit lifting with smooth-point
// certification. A node at level j is a vector x mod p^j with both forms
// vanishing mod p^j; it is certified as soon as some 2x2 Jacobian minor M
// satisfies 2 v_p(det M) < j (multivariate Hensel), and abandoned at depth
// kmax. Definitely-unsolvable means every branch died before kmax.

namespace {

using i128 = __int128;

struct TorsorSearch {
  i64 p;
  int kmax;
  i128 c11, c12, c1w;  // F1 = c11 z1^2 + c12 z2^2 + c1w w^2
  i128 c21, c23, c2w;  // F2 = c21 z1^2 + c23 z3^2 + c2w w^2
  bool inconclusive = false;
  long long nodes = 0;
  static constexpr long long kNodeBudget = 20'000'000;

  std::vector<i128> pw;  // pw[j] = p^j

  int vp(i128 x) const {
    if (x == 0) return kmax + 1;  // treated as "at least kmax"
    if (x < 0) x = -x;
    int v = 0;
    while (x % p == 0 && v <= kmax) {
      x /= p;
      ++v;
    }
    return v;
  }

  void eval(const std::array<i64, 4>& x, i128& f1, i128& f2) const {
    i128 z1 = static_cast<i128>(x[0]) * x[0];
    i128 z2 = static_cast<i128>(x[1]) * x[1];
    i128 z3 = static_cast<i128>(x[2]) * x[2];
    i128 w = static_cast<i128>(x[3]) * x[3];
    f1 = c11 * z1 + c12 * z2 + c1w * w;
    f2 = c21 * z1 + c23 * z3 + c2w * w;
  }

  bool certified(const std::array<i64, 4>& x, int j) const {
    // Jacobian rows (up to the global factor 2 kept explicit):
    //   (2 c11 z1, 2 c12 z2, 0, 2 c1w w)
    //   (2 c21 z1, 0, 2 c23 z3, 2 c2w w)
    i128 r1[4] = {2 * c11 * x[0], 2 * c12 * x[1], 0, 2 * c1w * x[3]};
    i128 r2[4] = {2 * c21 * x[0], 0, 2 * c23 * x[2], 2 * c2w * x[3]};
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        i128 det = r1[a] * r2[b] - r1[b] * r2[a];
        if (det == 0) continue;
        if (2 * vp(det) < j) return true;
      }
    }
    return false;
  }

  // x is fixed mod p^j (j >= 1), forms vanish mod p^j, coordinate `frozen`
  // receives no further digits (it is a unit; scaling normalization).
  bool lift(std::array<i64, 4>& x, int j, int frozen) {
    if (++nodes > kNodeBudget) {
      inconclusive = true;
      return false;
    }
    if (certified(x, j)) return true;
    if (j >= kmax) {
      inconclusive = true;
      return false;
    }
    i128 mod = pw[j + 1];
    std::array<int, 3> free{};
    int nf = 0;
    for (int i = 0; i < 4; ++i)
      if (i != frozen) free[nf++] = i;
    i64 step = static_cast<i64>(pw[j]);
    for (i64 d0 = 0; d0 < p; ++d0) {
      x[free[0]] += d0 * step;
      for (i64 d1 = 0; d1 < p; ++d1) {
        x[free[1]] += d1 * step;
        for (i64 d2 = 0; d2 < p; ++d2) {
          x[free[2]] += d2 * step;
          i128 f1, f2;
          eval(x, f1, f2);
          if (f1 % mod == 0 && f2 % mod == 0) {
            if (lift(x, j + 1, frozen)) return true;
          }
          x[free[2]] -= d2 * step;
        }
        x[free[1]] -= d1 * step;
      }
      x[free[0]] -= d0 * step;
    }
    return false;
  }

  bool run() {
    // Level 1: projective points mod p, first nonzero coordinate normalized
    // to 1 and frozen thereafter.
    for (int frozen = 0; frozen < 4; ++frozen) {
      std::array<i64, 4> x{0, 0, 0, 0};
      x[frozen] = 1;
      std::array<int, 3> rest{};
      int nr = 0;
      for (int i = frozen + 1; i < 4; ++i) rest[nr++] = i;
      for (i64 d0 = 0; d0 < (nr > 0 ? p : 1); ++d0) {
        if (nr > 0) x[rest[0]] = d0;
        for (i64 d1 = 0; d1 < (nr > 1 ? p : 1); ++d1) {
          if (nr > 1) x[rest[1]] = d1;
          for (i64 d2 = 0; d2 < (nr > 2 ? p : 1); ++d2) {
            if (nr > 2) x[rest[2]] = d2;
            i128 f1, f2;
            eval(x, f1, f2);
            if (f1 % p == 0 && f2 % p == 0) {
              auto y = x;
              if (lift(y, 1, frozen)) return true;
            }
          }
        }
      }
    }
    return false;
  }
};

}  // namespace

bool torsor_locally_solvable(const CurveData& c, i64 d, i64 b1, i64 b2, Place v) {
  if (v.is_real()) throw DomainError("torsor_locally_solvable: finite places only");
  if (b1 == 0 || b2 == 0 || d == 0) throw DomainError("torsor_locally_solvable: zero argument");
  i64 p = v.p;
  TorsorSearch s;
  s.p = p;
  // Precision bound k = 2 v_p(16 (d alpha * d beta * d gamma)^2) + 3.
  __int128 q = static_cast<__int128>(d) * c.alpha * d * c.beta * d * c.gamma;
  int vq = 0;
  for (__int128 t = q < 0 ? -q : q; t % p == 0; t /= p) ++vq;
  s.kmax = 2 * ((p == 2 ? 4 : 0) + 2 * vq) + 3;
  s.c11 = b1;
  s.c12 = -b2;
  s.c1w = static_cast<i128>(d) * c.alpha;
  s.c21 = b1;
  s.c23 = -static_cast<i128>(b1) * b2;
  s.c2w = static_cast<i128>(d) * c.beta;
  s.pw.resize(s.kmax + 2);
  s.pw[0] = 1;
  for (int i = 1; i <= s.kmax + 1; ++i) s.pw[i] = s.pw[i - 1] * p;
  bool found = s.run();
  if (!found && s.inconclusive) throw PrecisionExhausted(p, s.kmax);
  return found;
}

// ---------------------------------------------------------------------------

Context::Context(CurveData curve) : curve_(std::move(curve)) {
  bad_images_.resize(curve_.sigma.size());
  for (std::size_t i = 0; i < curve_.sigma.size(); ++i) {
    Place v{curve_.sigma[i]};
    auto sp = LocalSquareClassSpace::at(v);
    int m = sp.dim();
    bad_images_[i].resize(1ull << m);
    for (std::uint64_t cls = 0; cls < (1ull << m); ++cls) {
      bad_images_[i][cls] = image_by_search(sp.rep(cls), v);
    }
  }
}

F2Subspace Context::image_by_search(i64 d_rep, Place v) const {
  auto sp = LocalSquareClassSpace::at(v);
  int m = sp.dim();
  int ambient = 2 * m;
  int target = expected_kummer_dim(v);
  F2Subspace img(ambient);
  for (auto& t : two_torsion_image(curve_, d_rep, v)) img.insert(t.bits);
  std::uint64_t lo = (1ull << m) - 1;
  for (int bump = 0; bump <= 2 && img.dim() < target; ++bump) {
    try {
      for (std::uint64_t mask = 1; mask < (1ull << ambient); ++mask) {
        if (img.contains(mask)) continue;
        i64 b1 = sp.rep(mask & lo), b2 = sp.rep(mask >> m);
        if (torsor_locally_solvable(curve_, d_rep, b1, b2, v)) {
          img.insert(mask);
          if (img.dim() == target) break;
        }
      }
      break;
    } catch (const PrecisionExhausted&) {
      if (bump == 2) throw;
    }
  }
  if (img.dim() != target)
    throw std::logic_error("local Kummer image has unexpected dimension at p=" + std::to_string(v.p));
  return img;
}

F2Subspace Context::local_kummer_image(i64 d, Place v) const {
  auto sp = LocalSquareClassSpace::at(v);
  if (v.is_real()) {
    F2Subspace img(2);
    for (auto& t : two_torsion_image(curve_, d, v)) img.insert(t.bits);
    assert(img.dim() == 1);
    return img;
  }
  for (std::size_t i = 0; i < curve_.sigma.size(); ++i) {
    if (curve_.sigma[i] == v.p) return bad_images_[i][sp.coords(d)];
  }
  // Good odd place.
  int m = sp.dim();
  F2Subspace img(2 * m);
  if (d % v.p != 0) {
    img.insert(1ull << 0);  // (u_p, 1)
    img.insert(1ull << m);  // (1, u_p)
  } else {
    for (auto& t : two_torsion_image(curve_, d, v)) img.insert(t.bits);
    assert(img.dim() == 2);
  }
  return img;
}

int Context::norm_coker_dim(i64 d, Place v) const {
  if (v.is_real()) {
    if (curve_.theta > 0) return 0;  // real place splits in a real quadratic field
  } else if (curve::classify_in_K(v.p, curve_.theta) == curve::SplitType::Split) {
    return 0;
  }
  F2Subspace sd = local_kummer_image(d, v);
  F2Subspace sdt = local_kummer_image(squarefree_part(d * curve_.theta), v);
  return sd.dim() - f2lin::intersect(sd, sdt).dim();
}

int Context::g_exact(i64 d) const {
  auto sf = numtheory::SquarefreeInt::make(d);
  int g = norm_coker_dim(d, real_place);
  for (i64 p : curve_.sigma) g += norm_coker_dim(d, Place{p});
  for (auto& [p, e] : sf.factorization.entries) {
    if (!curve_.in_sigma(p)) g += norm_coker_dim(d, Place{p});
  }
  return g;
}

}  // namespace selk::localdescent
