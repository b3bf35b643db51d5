#pragma once

// Arithmetic policies shared by the dense kernels. SmallOps works on 16-bit
// codes of a SmallField, TowerOps on full tower elements. Both expose the
// same interface so kernels are written once.

#include <cstddef>
#include <utility>
#include <vector>

#include "trs/field_tower.hpp"

namespace trs::detail {

struct SmallOps {
  const SmallField* f;
  using value_type = SmallField::value_type;

  static value_type zero() { return 0; }
  static value_type one() { return 1; }
  static bool is_zero(value_type x) { return x == 0; }
  value_type add(value_type a, value_type b) const { return a ^ b; }
  value_type mul(value_type a, value_type b) const { return f->mul(a, b); }
  value_type inv(value_type a) const { return f->inv(a); }
  void axpy(value_type* dst, const value_type* src, std::size_t len,
            value_type s) const {
    f->axpy(dst, src, len, s);
  }
  void scale(value_type* row, std::size_t len, value_type s) const {
    if (s == 1) return;
    for (std::size_t i = 0; i < len; ++i) row[i] = f->mul(row[i], s);
  }
  value_type encode(Elem x) const { return f->encode(x); }
  Elem decode(value_type c) const { return f->decode(c); }
};

struct TowerOps {
  const FieldTower* t;
  using value_type = Elem;

  static Elem zero() { return Elem{}; }
  static Elem one() { return Elem{1}; }
  static bool is_zero(Elem x) { return x.is_zero(); }
  Elem add(Elem a, Elem b) const { return a + b; }
  Elem mul(Elem a, Elem b) const { return t->mul(a, b); }
  Elem inv(Elem a) const { return t->inv(a); }
  void axpy(Elem* dst, const Elem* src, std::size_t len, Elem s) const {
    t->axpy({dst, len}, {src, len}, s);
  }
  void scale(Elem* row, std::size_t len, Elem s) const {
    if (s == one()) return;
    for (std::size_t i = 0; i < len; ++i) row[i] = t->mul(row[i], s);
  }
  Elem encode(Elem x) const { return x; }
  Elem decode(Elem c) const { return c; }
};

/// Calls fn with the fastest policy able to hold entries of `level`.
template <class Fn>
decltype(auto) with_ops(const FieldTower& tower, unsigned level, Fn&& fn) {
  if (const SmallField* f = tower.small_for_level(level))
    return std::forward<Fn>(fn)(SmallOps{f});
  return std::forward<Fn>(fn)(TowerOps{&tower});
}

template <class Ops>
std::vector<typename Ops::value_type> encode_all(const Ops& ops, const Vec& in) {
  std::vector<typename Ops::value_type> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = ops.encode(in[i]);
  return out;
}

template <class Ops>
Vec decode_all(const Ops& ops, const std::vector<typename Ops::value_type>& in) {
  Vec out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = ops.decode(in[i]);
  return out;
}

/// In-place reduced row echelon form of a row-major rows x cols buffer.
/// Pivots are searched only in the first `pivot_cols` columns; the remaining
/// columns ride along (augmented part). Returns pivot columns.
template <class Ops>
std::vector<std::size_t> rref_inplace(const Ops& ops,
                                      typename Ops::value_type* a,
                                      std::size_t rows, std::size_t cols,
                                      std::size_t pivot_cols) {
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < pivot_cols && rank < rows; ++c) {
    std::size_t r = rank;
    while (r < rows && Ops::is_zero(a[r * cols + c])) ++r;
    if (r == rows) continue;
    auto* prow = a + rank * cols;
    if (r != rank) std::swap_ranges(prow + c, prow + cols, a + r * cols + c);
    ops.scale(prow + c, cols - c, ops.inv(prow[c]));
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank) continue;
      auto* row = a + i * cols;
      auto s = row[c];
      if (!Ops::is_zero(s)) ops.axpy(row + c, prow + c, cols - c, s);
    }
    pivots.push_back(c);
    ++rank;
  }
  return pivots;
}

}  // namespace trs::detail
