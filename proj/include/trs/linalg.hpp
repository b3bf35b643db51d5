#pragma once

// Dense matrices over one level of a field tower, and exact Gaussian
// elimination on them.

#include <cstddef>
#include <span>
#include <vector>

#include "trs/field_tower.hpp"

namespace trs {

class Matrix {
 public:
  Matrix() = default;
  /// Zero matrix. `level` is the subfield its entries are asserted to live in.
  Matrix(const FieldTower& tower, std::size_t rows, std::size_t cols,
         unsigned level);
  Matrix(const FieldTower& tower, std::size_t rows, std::size_t cols)
      : Matrix(tower, rows, cols, tower.levels()) {}

  static Matrix identity(const FieldTower& tower, std::size_t n);
  static Matrix from_rows(const FieldTower& tower, const std::vector<Vec>& rows,
                          unsigned level);

  const FieldTower& tower() const { return *tower_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  unsigned level() const { return level_; }
  void set_level(unsigned level);
  /// Checks the level invariant entry by entry.
  bool entries_in_level() const;

  Elem& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Elem operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::span<Elem> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Elem> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  Vec row_vector(std::size_t r) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
  }

  const Vec& data() const { return data_; }
  Vec& data() { return data_; }

  bool is_zero() const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  const FieldTower* tower_ = nullptr;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  unsigned level_ = 0;
  Vec data_;
};

namespace linalg {

struct RrefResult {
  Matrix reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
};

Matrix multiply(const Matrix& a, const Matrix& b);
/// Row vector times matrix.
Vec multiply(std::span<const Elem> v, const Matrix& a);
Matrix transpose(const Matrix& a);
/// Rows of a followed by rows of b.
Matrix vstack(const Matrix& a, const Matrix& b);

RrefResult rref(const Matrix& m);
std::size_t rank(const Matrix& m);
/// Rows form a basis of {x : m x^T = 0}.
Matrix right_kernel(const Matrix& m);
/// Some D with D a = b; throws Error(no_solution) if rowspace(b) is not
/// contained in rowspace(a).
Matrix solve_left(const Matrix& a, const Matrix& b);
Matrix inverse(const Matrix& square);

bool rowspace_equal(const Matrix& a, const Matrix& b);
bool rowspace_contains(const Matrix& a, std::span<const Elem> v);

}  // namespace linalg

}  // namespace trs
