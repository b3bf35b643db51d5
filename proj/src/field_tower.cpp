#include "trs/field_tower.hpp"

#include <algorithm>
#include <immintrin.h>
#include <map>
#include <mutex>
#include <utility>

#include "trs/errors.hpp"

namespace trs {

namespace {

constexpr u128 kOne = 1;

u128 low_mask(unsigned bits) {
  return bits >= 128 ? ~u128{0} : (kOne << bits) - 1;
}

u128 clmul_soft(std::uint64_t a, std::uint64_t b) {
  u128 tab[16];
  tab[0] = 0;
  tab[1] = a;
  for (int i = 2; i < 16; ++i)
    tab[i] = (i & 1) ? tab[i ^ 1] ^ a : tab[i >> 1] << 1;
  u128 r = 0;
  for (int s = 60; s >= 0; s -= 4) r = (r << 4) ^ tab[(b >> s) & 15];
  return r;
}

__attribute__((target("pclmul,sse2"))) u128 clmul_hw(std::uint64_t a,
                                                        std::uint64_t b) {
  __m128i x = _mm_set_epi64x(0, static_cast<long long>(a));
  __m128i y = _mm_set_epi64x(0, static_cast<long long>(b));
  __m128i r = _mm_clmulepi64_si128(x, y, 0x00);
  auto lo = static_cast<std::uint64_t>(_mm_cvtsi128_si64(r));
  auto hi = static_cast<std::uint64_t>(
      _mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)));
  return (static_cast<u128>(hi) << 64) | lo;
}

bool cpu_has_pclmul() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("pclmul");
}

// Multiply by X modulo X^m + low.
u128 mulx(u128 a, unsigned m, u128 low) {
  bool carry = ((a >> (m - 1)) & 1) != 0;
  a = (a << 1) & low_mask(m);
  return carry ? a ^ low : a;
}

u128 mulmod_slow(u128 a, u128 b, unsigned m, u128 low) {
  u128 r = 0;
  for (int i = 127; i >= 0; --i) {
    r = mulx(r, m, low);
    if ((b >> i) & 1) r ^= a;
  }
  return r;
}

std::vector<unsigned> prime_factors(std::uint64_t n) {
  std::vector<unsigned> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(static_cast<unsigned>(p));
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(static_cast<unsigned>(n));
  return out;
}

// Linearly independent F_2 vectors with distinct leading bits; each row also
// records which input combination produced it.
class F2Eliminator {
 public:
  // Returns true if v was independent of the rows so far.
  bool insert(u128 v, u128 combo, u128* dependency = nullptr) {
    for (const auto& row : rows_) {
      if ((v >> row.pivot) & 1) {
        v ^= row.vec;
        combo ^= row.combo;
      }
    }
    if (v == 0) {
      if (dependency) *dependency = combo;
      return false;
    }
    rows_.push_back({v, combo, gf2::degree(v)});
    return true;
  }

  // Combination of inserted vectors summing to v, if any.
  std::optional<u128> express(u128 v) const {
    u128 combo = 0;
    for (const auto& row : rows_) {
      if ((v >> row.pivot) & 1) {
        v ^= row.vec;
        combo ^= row.combo;
      }
    }
    if (v != 0) return std::nullopt;
    return combo;
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  struct Row {
    u128 vec;
    u128 combo;
    int pivot;
  };
  std::vector<Row> rows_;
};

// Fully reduced F_2 basis: each vector owns its leading bit exclusively.
std::vector<u128> reduced_basis(std::vector<u128> vs) {
  std::vector<u128> out;
  for (u128 v : vs) {
    for (u128 b : out)
      if ((v >> gf2::degree(b)) & 1) v ^= b;
    if (v == 0) continue;
    int p = gf2::degree(v);
    for (u128& b : out)
      if ((b >> p) & 1) b ^= v;
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

namespace gf2 {

int degree(u128 p) {
  auto hi = static_cast<std::uint64_t>(p >> 64);
  if (hi) return 127 - __builtin_clzll(hi);
  auto lo = static_cast<std::uint64_t>(p);
  return lo ? 63 - __builtin_clzll(lo) : -1;
}

u128 mod(u128 a, u128 b) {
  if (b == 0) throw Error(Errc::division_by_zero, "polynomial modulo zero");
  int db = degree(b);
  for (int da = degree(a); da >= db; da = degree(a)) a ^= b << (da - db);
  return a;
}

u128 gcd(u128 a, u128 b) {
  while (b != 0) {
    a = mod(a, b);
    std::swap(a, b);
  }
  return a;
}

namespace {

// (X^m + low) mod b for deg b < m.
u128 modulus_mod(unsigned m, u128 low, u128 b) {
  int db = degree(b);
  if (db == 0) return 0;
  u128 r = 1;
  for (unsigned i = 0; i < m; ++i) {
    r <<= 1;
    if ((r >> db) & 1) r ^= b;
  }
  return r ^ mod(low, b);
}

}  // namespace

bool is_irreducible(unsigned m, u128 low) {
  if (m < 1 || m > 128) return false;
  if (m == 1) return true;
  if ((low & 1) == 0) return false;
  auto x_pow_2k = [&](unsigned k) {
    u128 a = 2;
    for (unsigned i = 0; i < k; ++i) a = mulmod_slow(a, a, m, low);
    return a;
  };
  if (x_pow_2k(m) != 2) return false;
  for (unsigned p : prime_factors(m)) {
    u128 b = x_pow_2k(m / p) ^ 2;
    if (b == 0) return false;
    u128 r = modulus_mod(m, low, b);
    if (gcd(b, r) != 1) return false;
  }
  return true;
}

u128 smallest_irreducible_low(unsigned m) {
  if (m < 2 || m > 128)
    throw Error(Errc::degree_bound, "field degree must lie in [2, 128]");
  for (u128 low = 1;; low += 2)
    if (is_irreducible(m, low)) return low;
}

}  // namespace gf2

// --- SmallField -------------------------------------------------------------

SmallField::value_type SmallField::inv(value_type a) const {
  if (a == 0) throw Error(Errc::division_by_zero, "inverse of zero");
  return exp_[(order_ - 1 - log_[a]) % (order_ - 1)];
}

SmallField::value_type SmallField::pow(value_type a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  return exp_[(static_cast<std::uint64_t>(log_[a]) * (e % (order_ - 1))) %
              (order_ - 1)];
}

void SmallField::axpy(value_type* dst, const value_type* src, std::size_t len,
                      value_type s) const {
  if (s == 0) return;
  if (!table_.empty()) {
    const value_type* row = &table_[static_cast<std::size_t>(s) * order_];
    for (std::size_t i = 0; i < len; ++i) dst[i] ^= row[src[i]];
    return;
  }
  const std::uint32_t ls = log_[s];
  for (std::size_t i = 0; i < len; ++i)
    if (src[i]) dst[i] ^= exp_[ls + log_[src[i]]];
}

SmallField::value_type SmallField::encode(Elem x) const {
  if (identity_) return static_cast<value_type>(x.v);
  value_type c = 0;
  for (std::size_t s = 0; s < pivot_bits_.size(); ++s)
    c |= static_cast<value_type>(((x.v >> pivot_bits_[s]) & 1) << s);
  return c;
}

// --- FieldTower -------------------------------------------------------------

FieldTower FieldTower::create(unsigned m0, unsigned levels) {
  if (m0 < 2) throw Error(Errc::invalid_argument, "base degree must be >= 2");
  if (levels > 6 || (m0 << levels) > kMaxDegree)
    throw Error(Errc::degree_bound, "tower degree m0*2^l exceeds 128");

  FieldTower t;
  t.m0_ = m0;
  t.levels_ = levels;
  t.m_ = m0 << levels;
  t.mask_ = low_mask(t.m_);
  t.pclmul_ = cpu_has_pclmul();
  t.modulus_low_ = gf2::smallest_irreducible_low(t.m_);

  const unsigned m = t.m_;
  const unsigned chunks = (m - 1 + 7) / 8;
  std::vector<u128> pw(8 * chunks);
  pw[0] = t.modulus_low_;
  for (std::size_t s = 1; s < pw.size(); ++s)
    pw[s] = mulx(pw[s - 1], m, t.modulus_low_);
  t.reduce_.assign(chunks, std::vector<u128>(256, 0));
  for (unsigned j = 0; j < chunks; ++j)
    for (unsigned b = 1; b < 256; ++b)
      for (unsigned i = 0; i < 8; ++i)
        if ((b >> i) & 1) t.reduce_[j][b] ^= pw[8 * j + i];

  if (m <= 16) t.small_top_ = t.make_small(levels, true);

  // Per level, the F_2-linear map x -> x^(q_i) + x as byte tables, and its
  // kernel (the subfield) as an F_2 basis.
  const unsigned bytes = (m + 7) / 8;
  t.subfield_test_.resize(levels);
  t.subfield_basis_.resize(levels + 1);
  for (unsigned lvl = 0; lvl < levels; ++lvl) {
    std::vector<u128> image(m);
    for (unsigned b = 0; b < m; ++b) {
      Elem x{kOne << b};
      image[b] = (t.frobenius(x, t.level_degree(lvl)) + x).v;
    }
    auto& tab = t.subfield_test_[lvl];
    tab.assign(bytes, Vec(256));
    for (unsigned p = 0; p < bytes; ++p)
      for (unsigned v = 1; v < 256; ++v)
        for (unsigned i = 0; i < 8 && 8 * p + i < m; ++i)
          if ((v >> i) & 1) tab[p][v] += Elem{image[8 * p + i]};

    F2Eliminator elim;
    std::vector<u128> kernel;
    for (unsigned b = 0; b < m; ++b) {
      u128 dep = 0;
      if (!elim.insert(image[b], kOne << b, &dep)) kernel.push_back(dep);
    }
    if (kernel.size() != t.level_degree(lvl))
      throw Error(Errc::verification_failed, "subfield dimension mismatch");
    for (u128 v : reduced_basis(kernel)) t.subfield_basis_[lvl].push_back(Elem{v});
  }
  for (unsigned b = 0; b < m; ++b)
    t.subfield_basis_[levels].push_back(Elem{kOne << b});

  // Base basis {1, X, ..., X^(2^l - 1)}: X generates F_q over F_2, hence over
  // F_{q0}, so its powers up to the extension degree are independent.
  const unsigned ext = 1u << levels;
  for (unsigned j = 0; j < ext; ++j) t.base_basis_.push_back(t.pow(Elem{2}, j));

  const Vec& beta = t.subfield_basis_[0];
  F2Eliminator elim;
  for (unsigned j = 0; j < ext; ++j)
    for (unsigned s = 0; s < m0; ++s)
      elim.insert(t.mul_clmul(beta[s], t.base_basis_[j]).v,
                  kOne << (j * m0 + s));
  if (elim.rank() != m)
    throw Error(Errc::verification_failed, "base basis is not independent");
  t.bit_coords_.assign(m, Vec(ext));
  for (unsigned b = 0; b < m; ++b) {
    u128 combo = *elim.express(kOne << b);
    for (unsigned j = 0; j < ext; ++j)
      for (unsigned s = 0; s < m0; ++s)
        if ((combo >> (j * m0 + s)) & 1) t.bit_coords_[b][j] += beta[s];
  }

  if (m0 <= 16 && levels > 0) t.small_base_ = t.make_small(0, false);
  return t;
}

const FieldTower& FieldTower::shared(unsigned m0, unsigned levels) {
  static std::mutex mu;
  static std::map<std::pair<unsigned, unsigned>, std::unique_ptr<FieldTower>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{m0, levels}];
  if (!slot) slot = std::make_unique<FieldTower>(create(m0, levels));
  return *slot;
}

SmallField FieldTower::make_small(unsigned level, bool identity) const {
  SmallField f;
  f.degree_ = level_degree(level);
  f.order_ = 1u << f.degree_;
  f.identity_ = identity;
  f.decode_.resize(f.order_);
  if (identity) {
    for (std::uint32_t c = 0; c < f.order_; ++c) f.decode_[c] = Elem{c};
  } else {
    const Vec& basis = subfield_basis_[level];
    for (const Elem& b : basis)
      f.pivot_bits_.push_back(static_cast<unsigned>(gf2::degree(b.v)));
    for (std::uint32_t c = 0; c < f.order_; ++c)
      f.decode_[c] = subfield_from_bits(level, c);
  }

  const std::uint32_t group = f.order_ - 1;
  const auto factors = prime_factors(group);
  auto power = [&](Elem g, std::uint64_t e) {
    Elem r = one();
    for (; e; e >>= 1, g = mul_clmul(g, g))
      if (e & 1) r = mul_clmul(r, g);
    return r;
  };
  Elem gen;
  for (std::uint32_t c = 2; c < f.order_; ++c) {
    Elem g = f.decode_[c];
    bool primitive = std::all_of(factors.begin(), factors.end(), [&](unsigned p) {
      return !(power(g, group / p) == one());
    });
    if (primitive) {
      gen = g;
      break;
    }
  }
  if (gen.is_zero() && f.order_ > 2)
    throw Error(Errc::verification_failed, "no primitive element");
  if (f.order_ == 2) gen = one();

  f.exp_.assign(2 * static_cast<std::size_t>(group), 0);
  f.log_.assign(f.order_, 0);
  Elem x = one();
  for (std::uint32_t i = 0; i < group; ++i) {
    auto code = f.encode(x);
    f.exp_[i] = f.exp_[i + group] = code;
    f.log_[code] = static_cast<std::uint16_t>(i);
    x = mul_clmul(x, gen);
  }
  if (f.order_ <= 1024) {
    f.table_.assign(static_cast<std::size_t>(f.order_) * f.order_, 0);
    for (std::uint32_t a = 1; a < f.order_; ++a)
      for (std::uint32_t b = 1; b < f.order_; ++b)
        f.table_[a * f.order_ + b] = f.exp_[f.log_[a] + f.log_[b]];
  }
  return f;
}

u128 FieldTower::reduce(u128 lo, u128 hi) const {
  u128 r = lo;
  for (std::size_t j = 0; j < reduce_.size() && hi; ++j, hi >>= 8)
    r ^= reduce_[j][static_cast<unsigned>(hi & 0xff)];
  return r;
}

Elem FieldTower::mul_clmul(Elem a, Elem b) const {
  auto clmul = pclmul_ ? clmul_hw : clmul_soft;
  if (m_ <= 64) {
    u128 p = clmul(static_cast<std::uint64_t>(a.v), static_cast<std::uint64_t>(b.v));
    return Elem{reduce(p & mask_, p >> m_)};
  }
  auto a0 = static_cast<std::uint64_t>(a.v), a1 = static_cast<std::uint64_t>(a.v >> 64);
  auto b0 = static_cast<std::uint64_t>(b.v), b1 = static_cast<std::uint64_t>(b.v >> 64);
  u128 p0 = clmul(a0, b0);
  u128 p3 = clmul(a1, b1);
  u128 mid = clmul(a0, b1) ^ clmul(a1, b0);
  u128 lo = p0 ^ (mid << 64);
  u128 hi = p3 ^ (mid >> 64);
  // Product is lo + hi*X^128; split at X^m.
  u128 above = m_ == 128 ? hi : (lo >> m_) | (hi << (128 - m_));
  return Elem{reduce(lo & mask_, above)};
}

Elem FieldTower::inv(Elem a) const {
  if (a.is_zero()) throw Error(Errc::division_by_zero, "inverse of zero");
  if (small_top_) {
    const auto& f = *small_top_;
    return Elem{f.inv(static_cast<SmallField::value_type>(a.v))};
  }
  return pow(a, mask_ - 1);
}

Elem FieldTower::pow(Elem a, u128 e) const {
  Elem r = one();
  for (; e; e >>= 1) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
  }
  return r;
}

Elem FieldTower::frobenius(Elem a, unsigned s) const {
  for (unsigned i = 0; i < s % m_; ++i) a = mul_clmul(a, a);
  return a;
}

void FieldTower::axpy(std::span<Elem> dst, std::span<const Elem> src,
                      Elem s) const {
  if (dst.size() != src.size())
    throw Error(Errc::dimension_mismatch, "axpy length mismatch");
  if (s.is_zero()) return;
  if (s == one()) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    return;
  }
  if (small_top_) {
    const auto& f = *small_top_;
    const std::uint32_t ls = f.log_[static_cast<std::uint32_t>(s.v)];
    for (std::size_t i = 0; i < dst.size(); ++i)
      if (!src[i].is_zero())
        dst[i].v ^= f.exp_[ls + f.log_[static_cast<std::uint32_t>(src[i].v)]];
    return;
  }
  for (std::size_t i = 0; i < dst.size(); ++i)
    if (!src[i].is_zero()) dst[i] += mul_clmul(s, src[i]);
}

bool FieldTower::in_subfield(Elem x, unsigned level) const {
  if (level > levels_)
    throw Error(Errc::level_out_of_range, "subfield level out of range");
  if (level == levels_) return true;
  const auto& tab = subfield_test_[level];
  u128 acc = 0;
  u128 v = x.v;
  for (std::size_t p = 0; p < tab.size() && v; ++p, v >>= 8)
    acc ^= tab[p][static_cast<unsigned>(v & 0xff)].v;
  return acc == 0;
}

Elem FieldTower::subfield_from_bits(unsigned level, u128 bits) const {
  if (level > levels_)
    throw Error(Errc::level_out_of_range, "subfield level out of range");
  const Vec& basis = subfield_basis_[level];
  Elem x;
  for (std::size_t s = 0; s < basis.size(); ++s)
    if ((bits >> s) & 1) x += basis[s];
  return x;
}

Elem FieldTower::sample_subfield(unsigned level, Rng& rng) const {
  if (level > levels_)
    throw Error(Errc::level_out_of_range, "subfield level out of range");
  return subfield_from_bits(level, random_bits(rng, level_degree(level)));
}

Elem FieldTower::sample_eta(unsigned level, Rng& rng) const {
  if (level == 0 || level > levels_)
    throw Error(Errc::level_out_of_range, "eta level must lie in [1, l]");
  for (;;) {
    Elem x = sample_subfield(level, rng);
    if (!in_subfield(x, level - 1)) return x;
  }
}

Vec FieldTower::expand_base(Elem x) const {
  Vec out(base_basis_.size());
  expand_base_into(x, out);
  return out;
}

void FieldTower::expand_base_into(Elem x, std::span<Elem> out) const {
  if (out.size() != base_basis_.size())
    throw Error(Errc::dimension_mismatch, "expand_base output size");
  std::fill(out.begin(), out.end(), Elem{});
  for (unsigned b = 0; b < m_; ++b) {
    if (!((x.v >> b) & 1)) continue;
    const Vec& c = bit_coords_[b];
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += c[j];
  }
}

Elem FieldTower::contract_base(std::span<const Elem> coords) const {
  if (coords.size() != base_basis_.size())
    throw Error(Errc::dimension_mismatch, "contract_base input size");
  Elem x;
  for (std::size_t j = 0; j < coords.size(); ++j)
    x += mul(coords[j], base_basis_[j]);
  return x;
}

Vec FieldTower::base_field_elements() const {
  if (m0_ > 20)
    throw Error(Errc::instance_too_large, "base field too large to enumerate");
  Vec out;
  out.reserve(std::size_t{1} << m0_);
  for (u128 c = 0; c < (kOne << m0_); ++c) out.push_back(subfield_from_bits(0, c));
  std::sort(out.begin(), out.end());
  return out;
}

std::string FieldTower::modulus_hex() const {
  std::string out = to_hex(Elem{modulus_low_});
  return "x^" + std::to_string(m_) + "+" + out;
}

std::string FieldTower::to_hex(Elem x) const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(hex_width(), '0');
  u128 v = x.v;
  for (std::size_t i = s.size(); i-- > 0; v >>= 4) s[i] = kDigits[v & 15];
  return s;
}

Elem FieldTower::from_hex(std::string_view s) const {
  if (s.size() != hex_width())
    throw Error(Errc::format_error, "element must have exactly " +
                                        std::to_string(hex_width()) +
                                        " hex digits: '" + std::string(s) + "'");
  u128 v = 0;
  for (char c : s) {
    unsigned d;
    if (c >= '0' && c <= '9')
      d = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f')
      d = static_cast<unsigned>(c - 'a' + 10);
    else
      throw Error(Errc::format_error, "bad hex digit in '" + std::string(s) + "'");
    v = (v << 4) | d;
  }
  if (!is_reduced(Elem{v}))
    throw Error(Errc::format_error, "element exceeds field degree: " + std::string(s));
  return Elem{v};
}

}  // namespace trs
