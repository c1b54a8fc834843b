#include "selk/f2lin.hpp"

#include <algorithm>

namespace selk::f2lin {

namespace {
int lowbit(std::uint64_t v) { return __builtin_ctzll(v); }
}  // namespace

bool F2Subspace::insert(std::uint64_t v) {
  v = reduce(v);
  if (v == 0) return false;
  // Eliminate the new pivot from existing rows, then place the row in pivot order.
  int pv = lowbit(v);
  for (auto& r : rows_) {
    if ((r >> pv) & 1) r ^= v;
  }
  auto it = std::lower_bound(rows_.begin(), rows_.end(), v,
                             [](std::uint64_t a, std::uint64_t b) { return lowbit(a) < lowbit(b); });
  rows_.insert(it, v);
  return true;
}

std::uint64_t F2Subspace::reduce(std::uint64_t v) const {
  for (auto r : rows_) {
    if ((v >> lowbit(r)) & 1) v ^= r;
  }
  return v;
}

bool F2Subspace::contains(std::uint64_t v) const { return reduce(v) == 0; }

std::vector<std::uint64_t> F2Subspace::elements() const {
  std::vector<std::uint64_t> out(1, 0);
  out.reserve(1ull << dim());
  for (auto r : rows_) {
    std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] ^ r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

F2Subspace span(const std::vector<F2Vector>& vectors) {
  if (vectors.empty()) return F2Subspace(0);
  F2Subspace s(vectors.front().ambient);
  for (auto& v : vectors) {
    if (v.ambient != s.ambient()) throw DimensionMismatch("span: mixed ambient spaces");
    s.insert(v.bits);
  }
  return s;
}

F2Subspace span_masks(int ambient, const std::vector<std::uint64_t>& masks) {
  F2Subspace s(ambient);
  for (auto m : masks) s.insert(m);
  return s;
}

F2Subspace sum(const F2Subspace& a, const F2Subspace& b) {
  if (a.ambient() != b.ambient()) throw DimensionMismatch("sum: mixed ambient spaces");
  F2Subspace s = a;
  for (auto r : b.rows()) s.insert(r);
  return s;
}

F2Subspace kernel(int ambient, const std::vector<std::uint64_t>& constraint_rows) {
  // Gaussian elimination on the constraints, then read the solution basis off
  // the free coordinates.
  std::vector<std::uint64_t> rows;
  std::vector<int> pivot_of_row;
  std::vector<int> pivot_cols;
  for (auto c : constraint_rows) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if ((c >> pivot_of_row[i]) & 1) c ^= rows[i];
    }
    if (c == 0) continue;
    int pv = lowbit(c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if ((rows[i] >> pv) & 1) rows[i] ^= c;
    }
    rows.push_back(c);
    pivot_of_row.push_back(pv);
    pivot_cols.push_back(pv);
  }
  std::sort(pivot_cols.begin(), pivot_cols.end());
  F2Subspace s(ambient);
  for (int j = 0; j < ambient; ++j) {
    if (std::binary_search(pivot_cols.begin(), pivot_cols.end(), j)) continue;
    // Free coordinate j: back-substitute the pivot coordinates.
    std::uint64_t v = 1ull << j;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if ((rows[i] >> j) & 1) v |= (1ull << pivot_of_row[i]);
    }
    s.insert(v);
  }
  return s;
}

std::vector<std::uint64_t> annihilator(const F2Subspace& a) {
  // Forms f with <f, row> = 0 for every basis row: a kernel computation in the
  // dual coordinates (the standard dot pairing is symmetric).
  F2Subspace k = kernel(a.ambient(), a.rows());
  return k.rows();
}

F2Subspace intersect(const F2Subspace& a, const F2Subspace& b) {
  if (a.ambient() != b.ambient()) throw DimensionMismatch("intersect: mixed ambient spaces");
  std::vector<std::uint64_t> cons = annihilator(a);
  for (auto r : annihilator(b)) cons.push_back(r);
  return kernel(a.ambient(), cons);
}

int F2Pairing::pair(std::uint64_t x, std::uint64_t y) const {
  int acc = 0;
  std::uint64_t t = x;
  while (t) {
    int i = lowbit(t);
    t &= t - 1;
    acc ^= parity64(gram[i] & y);
  }
  return acc;
}

bool F2Pairing::nondegenerate() const {
  F2Subspace rowspace(ambient);
  for (auto g : gram) rowspace.insert(g);
  return rowspace.dim() == ambient;
}

F2Subspace orth_complement(const F2Subspace& a, const F2Pairing& p) {
  if (p.ambient != a.ambient()) throw DimensionMismatch("orth_complement: pairing on wrong space");
  // x in A-perp iff <x, r> = 0 for each basis row r; <x, r> = <(gram * r), x>.
  std::vector<std::uint64_t> cons;
  cons.reserve(a.rows().size());
  for (auto r : a.rows()) {
    std::uint64_t form = 0;
    for (int j = 0; j < p.ambient; ++j) {
      if (parity64(p.gram[j] & r)) form |= (1ull << j);
    }
    cons.push_back(form);
  }
  return kernel(a.ambient(), cons);
}

}  // namespace selk::f2lin
