// Dense linear algebra over F_2 for the Selmer condition systems. Ambient
// dimensions here are tiny (<= 64), so rows are single machine words.
//
// Subspaces are kept in reduced row echelon form with pivots at the lowest
// set index, so bases are canonical and comparable across runs.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace selk::f2lin {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct F2Vector {
  std::uint64_t bits = 0;
  int ambient = 0;

  bool get(int i) const { return (bits >> i) & 1; }
  void set(int i, bool v) {
    if (v)
      bits |= (1ull << i);
    else
      bits &= ~(1ull << i);
  }
  F2Vector operator+(const F2Vector& o) const {
    if (ambient != o.ambient) throw DimensionMismatch("F2Vector: mixed ambient spaces");
    return {bits ^ o.bits, ambient};
  }
  bool operator==(const F2Vector&) const = default;
};

inline int parity64(std::uint64_t x) { return __builtin_parityll(x); }

class F2Subspace {
 public:
  F2Subspace() = default;
  explicit F2Subspace(int ambient) : ambient_(ambient) {}

  int ambient() const { return ambient_; }
  int dim() const { return static_cast<int>(rows_.size()); }
  const std::vector<std::uint64_t>& rows() const { return rows_; }

  // Inserts v, keeping the basis reduced; returns true if dim grew.
  bool insert(std::uint64_t v);
  bool contains(std::uint64_t v) const;
  // Reduction of v against the basis (zero iff member).
  std::uint64_t reduce(std::uint64_t v) const;

  // All 2^dim member masks, in Gray-free lexicographic order of coefficients.
  std::vector<std::uint64_t> elements() const;

  bool operator==(const F2Subspace&) const = default;

 private:
  int ambient_ = 0;
  std::vector<std::uint64_t> rows_;  // RREF, pivots = lowest set bit, increasing
};

F2Subspace span(const std::vector<F2Vector>& vectors);
F2Subspace span_masks(int ambient, const std::vector<std::uint64_t>& masks);

F2Subspace sum(const F2Subspace& a, const F2Subspace& b);
F2Subspace intersect(const F2Subspace& a, const F2Subspace& b);

// Solution space of the homogeneous system {x : <row, x> = 0 for all rows}.
F2Subspace kernel(int ambient, const std::vector<std::uint64_t>& constraint_rows);

// Basis of the linear forms vanishing on A (the annihilator of A in the dual).
std::vector<std::uint64_t> annihilator(const F2Subspace& a);

// Symmetric bilinear form given by its Gram matrix over the ambient basis.
struct F2Pairing {
  int ambient = 0;
  std::vector<std::uint64_t> gram;  // gram[i] bit j = <e_i, e_j>

  int pair(std::uint64_t x, std::uint64_t y) const;  // in F_2
  bool nondegenerate() const;
};

F2Subspace orth_complement(const F2Subspace& a, const F2Pairing& p);

}  // namespace selk::f2lin
