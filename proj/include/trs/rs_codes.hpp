#pragma once

// Reed-Solomon codes over F_q with locators in the base field F_{q0}.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "trs/field_tower.hpp"
#include "trs/linalg.hpp"

namespace trs {

/// Dense univariate polynomial; coeffs[i] is the coefficient of X^i.
/// The coefficient list never has a trailing zero.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(Vec coeffs);
  static Polynomial monomial(std::size_t degree, Elem c = Elem{1});
  static Polynomial constant(Elem c) { return Polynomial(Vec{c}); }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const Vec& coeffs() const { return coeffs_; }
  Elem coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Elem{}; }
  Elem eval(const FieldTower& t, Elem x) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();
  Vec coeffs_;
};

namespace poly {

Polynomial add(const Polynomial& a, const Polynomial& b);
Polynomial mul(const FieldTower& t, const Polynomial& a, const Polynomial& b);
Polynomial scale(const FieldTower& t, const Polynomial& a, Elem s);
struct DivMod {
  Polynomial quot, rem;
};
/// Throws Error(division_by_zero) when b = 0.
DivMod divmod(const FieldTower& t, const Polynomial& a, const Polynomial& b);
/// prod (X - r).
Polynomial from_roots(const FieldTower& t, std::span<const Elem> roots);

}  // namespace poly

namespace rs {

/// Throws unless alpha is a list of distinct base-field elements.
void check_locators(const FieldTower& t, std::span<const Elem> alpha);

/// Row i is (alpha_0^i, ..., alpha_{n-1}^i), level 0.
Matrix generator(const FieldTower& t, std::span<const Elem> alpha, std::size_t k);

Vec evaluate(const FieldTower& t, const Polynomial& f, std::span<const Elem> alpha);

/// Lagrange interpolation on a fixed set of locators. The basis polynomials
/// are computed once so repeated calls cost O(n^2).
class Interpolator {
 public:
  Interpolator(const FieldTower& t, Vec alpha);
  Polynomial operator()(std::span<const Elem> y) const;
  std::size_t size() const { return alpha_.size(); }

 private:
  const FieldTower* t_;
  Vec alpha_;
  Vec basis_;  // n x n, row i = coefficients of the i-th Lagrange polynomial
};

Polynomial interpolate(const FieldTower& t, std::span<const Elem> alpha,
                       std::span<const Elem> y);

struct DecodeResult {
  Polynomial message;
  Vec error;
};

inline std::size_t decoding_radius(std::size_t n, std::size_t k) {
  return (n - k) / 2;
}

/// Berlekamp-Welch through one linear system. Reference decoder.
std::optional<DecodeResult> decode_bw(const FieldTower& t,
                                      std::span<const Elem> alpha, std::size_t k,
                                      std::span<const Elem> y);

/// Gao's decoder: partial extended Euclid on (prod(X - a_i), interpolant).
class GaoDecoder {
 public:
  GaoDecoder(const FieldTower& t, Vec alpha, std::size_t k);
  std::optional<DecodeResult> operator()(std::span<const Elem> y) const;

 private:
  const FieldTower* t_;
  Vec alpha_;
  std::size_t k_;
  Polynomial g0_;
  Interpolator interp_;
};

/// Syndrome decoder built on Berlekamp-Massey. The syndrome is linear in the
/// received word, which callers exploit to test many shifted words cheaply.
/// When the top field has at most 2^16 elements the error-locator search
/// runs on 16-bit codes.
class SyndromeDecoder {
 public:
  SyndromeDecoder(const FieldTower& t, Vec alpha, std::size_t k);

  std::size_t n() const { return alpha_.size(); }
  std::size_t k() const { return k_; }
  std::size_t radius() const { return tau_; }
  /// Number of syndrome components, n - k.
  std::size_t redundancy() const { return alpha_.size() - k_; }

  /// s_j = sum_i v_i alpha_i^j y_i for j < n - k, with v the column
  /// multipliers of the dual code.
  Vec syndrome(std::span<const Elem> y) const;

  /// Error positions of the unique pattern of weight <= radius with this
  /// syndrome, if the locator polynomial splits over the locators.
  std::optional<std::vector<std::size_t>> locate(std::span<const Elem> s) const;
  /// Same on 16-bit codes of the top field; requires small_top().
  std::optional<std::vector<std::size_t>> locate(
      std::span<const std::uint16_t> s) const;
  const SmallField* small() const { return small_; }

  /// Rebuilds the codeword from k positions outside `errors` and accepts it
  /// if it is within the radius of y.
  std::optional<DecodeResult> correct(std::span<const Elem> y,
                                      const std::vector<std::size_t>& errors) const;

  std::optional<DecodeResult> operator()(std::span<const Elem> y) const;

 private:
  template <class Ops>
  std::optional<std::vector<std::size_t>> locate_impl(
      const Ops& ops, std::span<const typename Ops::value_type> s) const;

  const FieldTower* t_;
  const SmallField* small_;
  Vec alpha_;
  std::vector<std::uint16_t> alpha_codes_;
  std::size_t k_;
  std::size_t tau_;
  Matrix parity_;  // (n-k) x n
  // Divisor of the discrete log that characterizes F_{q0} inside the small
  // top field.
  std::uint32_t base_log_step_ = 0;
};

/// Throwing convenience wrapper around the Gao decoder.
DecodeResult decode(const FieldTower& t, std::span<const Elem> alpha,
                    std::size_t k, std::span<const Elem> y);

/// Full-row-rank generator of the span of all g_i * g_j (i <= j).
Matrix schur_square(const Matrix& g);

/// Generator over F_{q0} of rowspace(g) intersected with F_{q0}^n.
Matrix subfield_subcode(const Matrix& g);

}  // namespace rs

}  // namespace trs
