#include "selk/selmerq.hpp"

#include <algorithm>

namespace selk::selmerq {

using numtheory::factorize;
using numtheory::hilbert;
using numtheory::legendre;
using numtheory::Place;

i64 GlobalClassBasis::to_int(std::uint64_t mask) const {
  i64 x = 1;
  for (int i = 0; i < size(); ++i)
    if ((mask >> i) & 1) x *= labels[i];
  return x;
}

std::uint64_t GlobalClassBasis::to_mask(i64 x) const {
  if (x == 0) throw DomainError("GlobalClassBasis: zero");
  std::uint64_t m = 0;
  if (x < 0) {
    m |= 1;
    x = -x;
  }
  for (int i = 1; i < size(); ++i) {
    if (x % labels[i] == 0) {
      m |= (1ull << i);
      x /= labels[i];
    }
  }
  if (x != 1) throw DomainError("GlobalClassBasis: unsupported prime support");
  return m;
}

GlobalClassBasis divisor_basis(const CurveData& c, const TwistDecomposition& t) {
  GlobalClassBasis b;
  b.labels.reserve(1 + c.sigma.size() + t.p0.size() + t.p1.size());
  b.labels.push_back(-1);
  for (i64 p : c.sigma) b.labels.push_back(p);
  std::vector<i64> extra(t.p0);
  extra.insert(extra.end(), t.p1.begin(), t.p1.end());
  std::sort(extra.begin(), extra.end());
  b.labels.insert(b.labels.end(), extra.begin(), extra.end());
  return b;
}

namespace {

// Linear form (as a bit mask over the basis) of x -> [chi(x) = -1], where chi
// is evaluated through its values on the basis elements.
template <typename Chi>
std::uint64_t character_row(const GlobalClassBasis& b, Chi chi) {
  std::uint64_t row = 0;
  for (int i = 0; i < b.size(); ++i)
    if (chi(b.labels[i]) == -1) row |= (1ull << i);
  return row;
}

}  // namespace

SdGroup S_d_group(const CurveData& c, const SquarefreeInt& d) {
  TwistDecomposition t = curve::twist_decompose(d, c);
  GlobalClassBasis basis = divisor_basis(c, t);
  std::vector<std::uint64_t> cons;
  for (i64 p : t.p2) {
    cons.push_back(character_row(basis, [&](i64 b) { return legendre(b, p); }));
  }
  i64 dalpha = d.value * c.alpha;
  for (i64 p : t.p1) {
    cons.push_back(character_row(basis, [&](i64 b) { return hilbert(b, dalpha, Place{p}); }));
  }
  SdGroup g;
  g.basis = std::move(basis);
  g.space = f2lin::kernel(g.basis.size(), cons);
  return g;
}

SdGroup S_d_group(const CurveData& c, i64 d) { return S_d_group(c, SquarefreeInt::make(d)); }

bool SdGroup::contains(i64 x) const {
  std::uint64_t m;
  try {
    m = basis.to_mask(x);
  } catch (const DomainError&) {
    return false;
  }
  return space.contains(m);
}

std::vector<i64> SdGroup::members() const {
  std::vector<i64> out;
  for (auto m : space.elements()) out.push_back(basis.to_int(m));
  std::sort(out.begin(), out.end(), [](i64 a, i64 b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    return a < b;
  });
  return out;
}

SelCtildeGroup sel_Ctilde(const CurveData& c, const SquarefreeInt& d) {
  TwistDecomposition t = curve::twist_decompose(d, c);
  GlobalClassBasis basis = divisor_basis(c, t);
  int B = basis.size();
  std::vector<std::uint64_t> cons;
  // (ii): both coordinates are squares mod every inert divisor of d.
  for (i64 p : t.p2) {
    std::uint64_t row = character_row(basis, [&](i64 b) { return legendre(b, p); });
    cons.push_back(row);
    cons.push_back(row << B);
  }
  // (iii): at split divisors of d the pair pairs trivially with the
  // 2-torsion image of E_d: (x1, d a)_p (x2, ab)_p = 1 = (x1, -ag)_p (x2, -da)_p.
  i64 dalpha = d.value * c.alpha;
  i64 ab = c.alpha * c.beta;
  i64 mag = -c.alpha * c.gamma;
  std::vector<i64> dprime_primes(t.p0);
  dprime_primes.insert(dprime_primes.end(), t.p1.begin(), t.p1.end());
  for (i64 p : dprime_primes) {
    Place v{p};
    std::uint64_t r1 = character_row(basis, [&](i64 b) { return hilbert(b, dalpha, v); });
    std::uint64_t r2 = character_row(basis, [&](i64 b) { return hilbert(b, ab, v); });
    cons.push_back(r1 | (r2 << B));
    std::uint64_t r3 = character_row(basis, [&](i64 b) { return hilbert(b, mag, v); });
    std::uint64_t r4 = character_row(basis, [&](i64 b) { return hilbert(b, -dalpha, v); });
    cons.push_back(r3 | (r4 << B));
  }
  SelCtildeGroup g;
  g.basis = std::move(basis);
  g.space = f2lin::kernel(2 * B, cons);
  return g;
}

SelCtildeGroup sel_Ctilde(const CurveData& c, i64 d) { return sel_Ctilde(c, SquarefreeInt::make(d)); }

std::vector<std::pair<i64, i64>> SelCtildeGroup::members() const {
  int B = basis.size();
  std::uint64_t lo = (B == 64) ? ~0ull : ((1ull << B) - 1);
  std::vector<std::pair<i64, i64>> out;
  for (auto m : space.elements()) out.emplace_back(basis.to_int(m & lo), basis.to_int(m >> B));
  std::sort(out.begin(), out.end());
  return out;
}

bool containment_check(const CurveData& c, i64 d) {
  auto sf = SquarefreeInt::make(d);
  SelCtildeGroup sel = sel_Ctilde(c, sf);
  SdGroup sd = S_d_group(c, sf);
  // x1 ranges over a subgroup, so checking the basis rows suffices.
  int B = sel.basis.size();
  std::uint64_t lo = (1ull << B) - 1;
  for (auto row : sel.space.rows()) {
    if (!sd.space.contains(row & lo)) return false;
  }
  return true;
}

int g_surrogate(const CurveData& c, i64 d) { return 2 * curve::omega_EK(d, c); }

std::optional<int> predicted_dim_selK(const localdescent::Context& ctx, i64 d) {
  if (!sel_Ctilde(ctx.curve(), d).trivial()) return std::nullopt;
  return ctx.g_exact(d) - 2;
}

double ek_statistic(i64 d, int dim) {
  i64 ad = d < 0 ? -d : d;
  if (ad <= 2) throw DomainError("ek_statistic: |d| must be at least 3");
  double ll = std::log(std::log(static_cast<double>(ad)));
  return (dim - ll) / std::sqrt(2.0 * ll);
}

}  // namespace selk::selmerq
