#include "trs/linalg.hpp"

#include <algorithm>

#include "trs/detail/field_ops.hpp"
#include "trs/errors.hpp"

namespace trs {

Matrix::Matrix(const FieldTower& tower, std::size_t rows, std::size_t cols,
               unsigned level)
    : tower_(&tower), rows_(rows), cols_(cols), level_(level),
      data_(rows * cols) {
  if (level > tower.levels())
    throw Error(Errc::level_out_of_range, "matrix level above tower height");
}

Matrix Matrix::identity(const FieldTower& tower, std::size_t n) {
  Matrix m(tower, n, n, 0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = tower.one();
  return m;
}

Matrix Matrix::from_rows(const FieldTower& tower, const std::vector<Vec>& rows,
                         unsigned level) {
  std::size_t cols = rows.empty() ? 0 : rows[0].size();
  Matrix m(tower, rows.size(), cols, level);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw Error(Errc::dimension_mismatch, "ragged rows");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

void Matrix::set_level(unsigned level) {
  if (level > tower_->levels())
    throw Error(Errc::level_out_of_range, "matrix level above tower height");
  level_ = level;
}

bool Matrix::entries_in_level() const {
  if (level_ == tower_->levels()) return true;
  return std::all_of(data_.begin(), data_.end(),
                     [&](Elem x) { return tower_->in_subfield(x, level_); });
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](Elem x) { return x.is_zero(); });
}

namespace linalg {

namespace {

using detail::with_ops;

void require_same_tower(const Matrix& a, const Matrix& b) {
  if (&a.tower() != &b.tower())
    throw Error(Errc::invalid_argument, "matrices over different towers");
}

}  // namespace

Matrix multiply(const Matrix& a, const Matrix& b) {
  require_same_tower(a, b);
  if (a.cols() != b.rows())
    throw Error(Errc::dimension_mismatch, "multiply: inner dimensions differ");
  unsigned level = std::max(a.level(), b.level());
  Matrix out(a.tower(), a.rows(), b.cols(), level);
  with_ops(a.tower(), level, [&](const auto& ops) {
    auto ea = detail::encode_all(ops, a.data());
    auto eb = detail::encode_all(ops, b.data());
    std::vector<typename std::decay_t<decltype(ops)>::value_type> eo(
        out.data().size());
    const std::size_t n = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t k = 0; k < a.cols(); ++k) {
        auto s = ea[i * a.cols() + k];
        if (!ops.is_zero(s)) ops.axpy(&eo[i * n], &eb[k * n], n, s);
      }
    out.data() = detail::decode_all(ops, eo);
  });
  return out;
}

Vec multiply(std::span<const Elem> v, const Matrix& a) {
  if (v.size() != a.rows())
    throw Error(Errc::dimension_mismatch, "vector-matrix: length mismatch");
  Vec out(a.cols());
  const FieldTower& t = a.tower();
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!v[k].is_zero()) t.axpy(out, a.row(k), v[k]);
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.tower(), a.cols(), a.rows(), a.level());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  require_same_tower(a, b);
  if (a.cols() != b.cols())
    throw Error(Errc::dimension_mismatch, "vstack: column counts differ");
  Matrix out(a.tower(), a.rows() + b.rows(), a.cols(),
             std::max(a.level(), b.level()));
  std::copy(a.data().begin(), a.data().end(), out.data().begin());
  std::copy(b.data().begin(), b.data().end(),
            out.data().begin() + static_cast<std::ptrdiff_t>(a.data().size()));
  return out;
}

RrefResult rref(const Matrix& m) {
  RrefResult res;
  res.reduced = m;
  if (m.rows() == 0 || m.cols() == 0) return res;
  with_ops(m.tower(), m.level(), [&](const auto& ops) {
    auto buf = detail::encode_all(ops, m.data());
    res.pivots = detail::rref_inplace(ops, buf.data(), m.rows(), m.cols(),
                                      m.cols());
    res.reduced.data() = detail::decode_all(ops, buf);
  });
  res.rank = res.pivots.size();
  return res;
}

std::size_t rank(const Matrix& m) { return rref(m).rank; }

Matrix right_kernel(const Matrix& m) {
  const std::size_t n = m.cols();
  RrefResult r = rref(m);
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : r.pivots) is_pivot[c] = true;
  Matrix ker(m.tower(), n - r.rank, n, m.level());
  std::size_t out = 0;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    // x_f = 1, x_pivot(i) = -R[i][f], other free variables 0
    ker(out, f) = m.tower().one();
    for (std::size_t i = 0; i < r.rank; ++i)
      ker(out, r.pivots[i]) = r.reduced(i, f);
    ++out;
  }
  return ker;
}

Matrix solve_left(const Matrix& a, const Matrix& b) {
  require_same_tower(a, b);
  if (a.cols() != b.cols())
    throw Error(Errc::dimension_mismatch, "solve_left: column counts differ");
  // Reduce [A^T | B^T]; each column of B^T must be a combination of A^T's.
  const std::size_t ar = a.rows(), n = a.cols(), br = b.rows();
  const std::size_t width = ar + br;
  unsigned level = std::max(a.level(), b.level());
  Matrix d(a.tower(), br, ar, level);
  with_ops(a.tower(), level, [&](const auto& ops) {
    using V = typename std::decay_t<decltype(ops)>::value_type;
    std::vector<V> buf(n * width);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < ar; ++i) buf[j * width + i] = ops.encode(a(i, j));
      for (std::size_t i = 0; i < br; ++i)
        buf[j * width + ar + i] = ops.encode(b(i, j));
    }
    auto piv = detail::rref_inplace(ops, buf.data(), n, width, ar);
    for (std::size_t row = piv.size(); row < n; ++row)
      for (std::size_t i = 0; i < br; ++i)
        if (!ops.is_zero(buf[row * width + ar + i]))
          throw Error(Errc::no_solution, "solve_left: system is inconsistent");
    for (std::size_t p = 0; p < piv.size(); ++p)
      for (std::size_t i = 0; i < br; ++i)
        d(i, piv[p]) = ops.decode(buf[p * width + ar + i]);
  });
#ifndef NDEBUG
  if (!(multiply(d, a) == b))
    throw Error(Errc::verification_failed, "solve_left: D A != B");
#endif
  return d;
}

Matrix inverse(const Matrix& square) {
  if (square.rows() != square.cols())
    throw Error(Errc::dimension_mismatch, "inverse of a non-square matrix");
  if (rank(square) != square.rows())
    throw Error(Errc::no_solution, "matrix is singular");
  Matrix id = Matrix::identity(square.tower(), square.rows());
  id.set_level(square.level());
  return solve_left(square, id);
}

bool rowspace_equal(const Matrix& a, const Matrix& b) {
  require_same_tower(a, b);
  if (a.cols() != b.cols())
    throw Error(Errc::dimension_mismatch, "rowspace_equal: column counts differ");
  RrefResult ra = rref(a), rb = rref(b);
  if (ra.rank != rb.rank || ra.pivots != rb.pivots) return false;
  for (std::size_t i = 0; i < ra.rank; ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!(ra.reduced(i, j) == rb.reduced(i, j))) return false;
  return true;
}

bool rowspace_contains(const Matrix& a, std::span<const Elem> v) {
  if (v.size() != a.cols())
    throw Error(Errc::dimension_mismatch, "rowspace_contains: length mismatch");
  RrefResult r = rref(a);
  Vec rest(v.begin(), v.end());
  const FieldTower& t = a.tower();
  for (std::size_t i = 0; i < r.rank; ++i) {
    Elem s = rest[r.pivots[i]];
    if (!s.is_zero()) t.axpy(rest, r.reduced.row(i), s);
  }
  return std::all_of(rest.begin(), rest.end(), [](Elem x) { return x.is_zero(); });
}

}  // namespace linalg

}  // namespace trs
