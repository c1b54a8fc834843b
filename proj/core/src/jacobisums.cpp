#include "selk/jacobisums.hpp"

#include <algorithm>

#include "selk/selmerq.hpp"

namespace selk::jacobisums {

using numtheory::gcd64;
using numtheory::jacobi;

Rational rat_pow(const Rational& base, int e) {
  if (e < 0) return 1 / rat_pow(base, -e);
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

std::array<std::array<int, 8>, 8> JacobiSumSpec::phi() {
  std::array<std::array<int, 8>, 8> f{};
  // (D4/D2)(D2/D4)(D6/D2)(D2/D6)(D1/D2)(D5/D2)(D7/D2)(D0/D4)(D3/D4)(D0/D6)(D3/D6)
  f[4][2] = f[2][4] = f[6][2] = f[2][6] = 1;
  f[1][2] = f[5][2] = f[7][2] = 1;
  f[0][4] = f[3][4] = f[0][6] = f[3][6] = 1;
  return f;
}

Rational JacobiSumSpec::kappa(int i) const {
  if (i <= 1) return gamma;
  if (i <= 5) return 2;
  return 2 / gamma;
}

bool JacobiSumSpec::linked(int i, int j) {
  auto f = phi();
  return i != j && (f[i][j] + f[j][i]) == 1;
}

JacobiSumSpec make_spec(Rational gamma, i64 lambda, i64 eta) {
  if (gamma <= 0) throw DomainError("make_spec: gamma must be positive");
  return JacobiSumSpec{std::move(gamma), lambda, eta};
}

int J_term(i64 eta, i64 lambda, const std::array<i64, 8>& D) {
  for (int i = 0; i < 8; ++i) {
    if (D[i] <= 0 || (D[i] & 1) == 0) throw DomainError("J_term: variables must be positive and odd");
    for (int j = i + 1; j < 8; ++j)
      if (gcd64(D[i], D[j]) != 1) throw DomainError("J_term: variables must be pairwise coprime");
  }
  int s = 1;
  s *= jacobi(eta, D[2]);
  s *= jacobi(lambda, D[4]);
  s *= jacobi(lambda, D[6]);
  s *= jacobi(D[4], D[2]) * jacobi(D[2], D[4]);
  s *= jacobi(D[6], D[2]) * jacobi(D[2], D[6]);
  s *= jacobi(D[1], D[2]) * jacobi(D[5], D[2]) * jacobi(D[7], D[2]);
  s *= jacobi(D[0], D[4]) * jacobi(D[3], D[4]);
  s *= jacobi(D[0], D[6]) * jacobi(D[3], D[6]);
  return s;
}

namespace {

struct FamilyElement {
  i64 n;
  std::uint64_t pmask;  // bitmask over the shared prime list
  int omega;
};

}  // namespace

Rational S_gamma(const CurveData& c, const JacobiSumSpec& spec, const Rational& X) {
  if (X <= 0) return 0;
  i64 bound = boost::multiprecision::cpp_int(boost::multiprecision::numerator(X) /
                                             boost::multiprecision::denominator(X))
                  .convert_to<i64>();
  // Primes usable by the tuple variables: odd, outside Sigma.
  std::vector<i64> primes;
  std::vector<curve::PrimeClass> pclass;
  for (i64 p = 3; p <= bound; p += 2) {
    if (!numtheory::is_prime(static_cast<numtheory::u64>(p))) continue;
    if (c.in_sigma(p)) continue;
    primes.push_back(p);
    pclass.push_back(curve::prime_class(p, c));
  }
  if (primes.size() > 64) throw DomainError("S_gamma: X beyond the desk-scale enumerator");
  // Family lists with prime-support masks for coprimality pruning.
  std::array<std::vector<FamilyElement>, 3> fam;
  for (int f = 0; f < 3; ++f) fam[f].push_back({1, 0, 0});
  for (std::size_t i = 0; i < primes.size(); ++i) {
    int f;
    switch (pclass[i]) {
      case curve::PrimeClass::P0: f = 0; break;
      case curve::PrimeClass::P1: f = 1; break;
      case curve::PrimeClass::P2: f = 2; break;
      default: continue;
    }
    std::size_t n = fam[f].size();
    for (std::size_t j = 0; j < n; ++j) {
      if (fam[f][j].n <= bound / primes[i]) {
        fam[f].push_back({fam[f][j].n * primes[i], fam[f][j].pmask | (1ull << i),
                          fam[f][j].omega + 1});
      }
    }
  }
  for (int f = 0; f < 3; ++f)
    std::sort(fam[f].begin(), fam[f].end(), [](auto& a, auto& b) { return a.n < b.n; });

  Rational total = 0;
  std::array<i64, 8> D{1, 1, 1, 1, 1, 1, 1, 1};
  std::array<int, 8> omega{};
  auto num = boost::multiprecision::numerator(X);
  auto den = boost::multiprecision::denominator(X);

  // Depth-first over the eight slots; prod * den <= num keeps the bound exact.
  auto rec = [&](auto&& self, int slot, i64 prod, std::uint64_t used) -> void {
    if (slot == 8) {
      if (spec.lambda == 1 && D[0] == 1 && D[2] == 1 && D[3] == 1) return;
      Rational w = 1;
      w /= rat_pow(spec.gamma, omega[0] + omega[1]);
      w /= rat_pow(2, omega[2] + omega[3] + omega[4] + omega[5]);
      w /= rat_pow(Rational(2) / spec.gamma, omega[6] + omega[7]);
      total += w * J_term(spec.eta, spec.lambda, D);
      return;
    }
    for (auto& e : fam[JacobiSumSpec::family[slot]]) {
      if (boost::multiprecision::cpp_int(prod) * e.n * den > num) break;  // lists sorted
      if (e.pmask & used) continue;
      D[slot] = e.n;
      omega[slot] = e.omega;
      self(self, slot + 1, prod * e.n, used | e.pmask);
    }
    D[slot] = 1;
    omega[slot] = 0;
  };
  rec(rec, 0, 1, 0);
  return total;
}

Rational lhs_weighted_average(const CurveData& c, const Rational& gamma, const Rational& X) {
  Rational total = 0;
  auto num = boost::multiprecision::numerator(X);
  auto den = boost::multiprecision::denominator(X);
  for (i64 ad = 1; boost::multiprecision::cpp_int(ad) * den <= num; ++ad) {
    if (!numtheory::is_squarefree(ad)) continue;
    for (i64 d : {-ad, ad}) {
      auto sf = numtheory::SquarefreeInt::make(d);
      auto t = curve::twist_decompose(sf, c);
      int w0 = static_cast<int>(t.p0.size());
      int w2 = static_cast<int>(t.p2.size());
      auto sd = selmerq::S_d_group(c, sf);
      Rational weight = rat_pow(gamma, w2 - w0);
      total += weight * Rational((boost::multiprecision::cpp_int(1) << sd.dim()) - 1);
    }
  }
  return total;
}

IdentityReport verify_identity(const CurveData& c, const Rational& gamma, const Rational& X) {
  Rational lhs = lhs_weighted_average(c, gamma, X);
  Rational rhs = 0;
  std::vector<i64> divs;
  for (i64 m = 1; m <= c.N; ++m)
    if (c.N % m == 0) divs.push_back(m);
  for (i64 am : divs) {
    for (int asign : {1, -1}) {
      i64 a = asign * am;
      for (i64 xm : divs) {
        for (int xsign : {1, -1}) {
          i64 xN = xsign * xm;
          auto spec = make_spec(gamma, xN, -a * xN * c.alpha);
          rhs += S_gamma(c, spec, X / am);
        }
      }
    }
  }
  return {lhs, rhs, lhs == rhs};
}

}  // namespace selk::jacobisums
