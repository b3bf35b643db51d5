#pragma once

// Binary extension field towers F_{q0} < F_{q0^2} < ... < F_{q0^(2^l)} = F_q.
//
// Every element of every level is stored in the top field F_q, in polynomial
// basis modulo the smallest irreducible polynomial of degree m = m0 * 2^l.
// Subfields are the fixed sets of the matching Frobenius power.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trs/rng.hpp"

namespace trs {

struct Elem {
  u128 v = 0;

  constexpr Elem() = default;
  constexpr explicit Elem(u128 x) : v(x) {}

  constexpr bool is_zero() const { return v == 0; }

  friend constexpr Elem operator+(Elem a, Elem b) { return Elem{a.v ^ b.v}; }
  friend constexpr Elem operator-(Elem a, Elem b) { return Elem{a.v ^ b.v}; }
  constexpr Elem& operator+=(Elem o) {
    v ^= o.v;
    return *this;
  }
  constexpr Elem& operator-=(Elem o) {
    v ^= o.v;
    return *this;
  }
  friend constexpr bool operator==(Elem a, Elem b) { return a.v == b.v; }
  friend constexpr bool operator<(Elem a, Elem b) { return a.v < b.v; }
};

using Vec = std::vector<Elem>;

/// GF(2^d), d <= 16, on 16-bit codes with log/antilog tables.
///
/// A SmallField is a view of one level of a tower: `encode` maps a top-field
/// element of that level to its code, `decode` maps back. For the top field
/// of a tower with m <= 16 the codec is the identity.
class SmallField {
 public:
  using value_type = std::uint16_t;

  unsigned degree() const { return degree_; }
  std::uint32_t order() const { return order_; }

  value_type mul(value_type a, value_type b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  value_type inv(value_type a) const;  // throws on zero
  value_type div(value_type a, value_type b) const { return mul(a, inv(b)); }
  value_type pow(value_type a, std::uint64_t e) const;

  std::uint16_t log(value_type a) const { return log_[a]; }
  value_type exp(std::uint32_t i) const { return exp_[i % (order_ - 1)]; }

  /// dst[i] += s * src[i].
  void axpy(value_type* dst, const value_type* src, std::size_t len,
            value_type s) const;

  value_type encode(Elem x) const;
  Elem decode(value_type c) const { return decode_[c]; }
  bool is_identity_codec() const { return identity_; }

 private:
  friend class FieldTower;

  unsigned degree_ = 0;
  std::uint32_t order_ = 0;
  std::vector<std::uint16_t> log_;
  std::vector<value_type> exp_;    // doubled to skip a reduction
  std::vector<value_type> table_;  // full product table when order <= 1024
  bool identity_ = true;
  std::vector<unsigned> pivot_bits_;
  std::vector<Elem> decode_;
};

class FieldTower {
 public:
  static constexpr unsigned kMaxDegree = 128;

  /// Builds the tower with base degree m0 and `levels` quadratic steps.
  static FieldTower create(unsigned m0, unsigned levels);

  /// Process-wide cached tower; references stay valid for the program's life.
  static const FieldTower& shared(unsigned m0, unsigned levels);

  unsigned base_degree() const { return m0_; }
  unsigned levels() const { return levels_; }
  unsigned degree() const { return m_; }
  unsigned level_degree(unsigned level) const { return m0_ << level; }
  /// Modulus without its leading X^m term.
  u128 modulus_low() const { return modulus_low_; }
  std::string modulus_hex() const;

  Elem zero() const { return Elem{}; }
  Elem one() const { return Elem{1}; }

  Elem add(Elem a, Elem b) const { return a + b; }
  Elem mul(Elem a, Elem b) const {
    if (small_top_) {
      if (a.v == 0 || b.v == 0) return Elem{};
      const auto& f = *small_top_;
      return Elem{f.exp_[f.log_[static_cast<std::uint32_t>(a.v)] +
                         f.log_[static_cast<std::uint32_t>(b.v)]]};
    }
    return mul_clmul(a, b);
  }
  /// Carry-less multiply then table reduction; valid for every degree.
  Elem mul_clmul(Elem a, Elem b) const;
  Elem square(Elem a) const { return mul(a, a); }
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, u128 e) const;
  /// a^(2^s).
  Elem frobenius(Elem a, unsigned s) const;

  /// dst[i] += s * src[i].
  void axpy(std::span<Elem> dst, std::span<const Elem> src, Elem s) const;

  bool is_reduced(Elem x) const { return (x.v & ~mask_) == 0; }

  /// True iff x^(q_level) = x.
  bool in_subfield(Elem x, unsigned level) const;
  /// Uniform element of F_{q_level}.
  Elem sample_subfield(unsigned level, Rng& rng) const;
  /// Uniform element of F_{q_level} \ F_{q_(level-1)}, level >= 1.
  Elem sample_eta(unsigned level, Rng& rng) const;
  /// Element of F_{q_level} from its coordinates in the F_2 basis of that
  /// subfield (the low level_degree(level) bits of `bits`).
  Elem subfield_from_bits(unsigned level, u128 bits) const;

  /// F_{q0}-basis of F_q: 1, g, ..., g^(2^l - 1).
  const Vec& base_basis() const { return base_basis_; }
  /// Coordinates of x over F_{q0} in base_basis().
  Vec expand_base(Elem x) const;
  void expand_base_into(Elem x, std::span<Elem> out) const;
  Elem contract_base(std::span<const Elem> coords) const;

  /// All elements of F_{q0} in ascending encoding order (q0 <= 2^20).
  Vec base_field_elements() const;

  /// Fixed-width lowercase hex of width ceil(m/4).
  std::string to_hex(Elem x) const;
  /// Strict inverse of to_hex; throws Error(format_error).
  Elem from_hex(std::string_view s) const;
  std::size_t hex_width() const { return (m_ + 3) / 4; }

  const SmallField* small_top() const {
    return small_top_ ? &*small_top_ : nullptr;
  }
  const SmallField* small_base() const {
    return small_base_ ? &*small_base_ : nullptr;
  }
  /// Fast field for entries of the given level, if one exists.
  const SmallField* small_for_level(unsigned level) const {
    if (small_top_) return &*small_top_;
    if (level == 0 && small_base_) return &*small_base_;
    return nullptr;
  }

  bool has_pclmul() const { return pclmul_; }

 private:
  FieldTower() = default;

  u128 reduce(u128 lo, u128 hi) const;
  Elem linear_map(const std::vector<std::vector<Elem>>& tab, Elem x) const;
  SmallField make_small(unsigned level, bool identity) const;

  unsigned m0_ = 0;
  unsigned levels_ = 0;
  unsigned m_ = 0;
  u128 modulus_low_ = 0;
  u128 mask_ = 0;
  bool pclmul_ = false;

  // reduce_[j][b] = (b * X^(m + 8j)) mod f
  std::vector<std::vector<u128>> reduce_;
  // frob_[i][p][b] = (b X^(8p))^(q_i) + b X^(8p): zero on F_{q_i}
  std::vector<std::vector<std::vector<Elem>>> subfield_test_;
  // F_2 bases of each subfield
  std::vector<Vec> subfield_basis_;
  Vec base_basis_;
  // bit_coords_[b] = expand_base(X^b)
  std::vector<Vec> bit_coords_;

  std::optional<SmallField> small_top_;
  std::optional<SmallField> small_base_;
};

namespace gf2 {

// Polynomials over F_2 packed into integers, used for modulus selection.

/// Degree of a nonzero polynomial.
int degree(u128 p);
u128 mod(u128 a, u128 b);
u128 gcd(u128 a, u128 b);
/// True iff X^m + low is irreducible (Rabin's test).
bool is_irreducible(unsigned m, u128 low);
/// Smallest irreducible X^m + low, 2 <= m <= 128.
u128 smallest_irreducible_low(unsigned m);

}  // namespace gf2

}  // namespace trs
