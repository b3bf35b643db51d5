#include "trs/trs_codes.hpp"

#include <algorithm>
#include <bit>

#include "trs/errors.hpp"

namespace trs {

namespace {

using i128 = __int128;

bool is_power_of_two(std::uint64_t x) { return x >= 2 && (x & (x - 1)) == 0; }

std::vector<std::size_t> complement_of_hooks(std::size_t k,
                                             const std::vector<std::size_t>& h) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i)
    if (std::find(h.begin(), h.end(), i) == h.end()) out.push_back(i);
  return out;
}

// Range conditions on hooks and twists; empty when all hold.
std::vector<std::string> range_violations(std::size_t n, std::size_t k,
                                          const std::vector<std::size_t>& t,
                                          const std::vector<std::size_t>& h) {
  std::vector<std::string> v;
  if (t.size() != h.size()) v.push_back("as many twists as hooks");
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h[j] >= k) v.push_back("hook " + std::to_string(h[j]) + " outside [0, k)");
    if (j > 0 && h[j] <= h[j - 1]) v.push_back("hooks strictly increasing");
  }
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (t[j] < 1 || t[j] + k > n)
      v.push_back("twist " + std::to_string(t[j]) + " outside [1, n-k]");
    for (std::size_t i = 0; i < j; ++i)
      if (t[i] == t[j]) v.push_back("twists pairwise distinct");
  }
  return v;
}

}  // namespace

unsigned TrsParams::m0() const { return static_cast<unsigned>(std::countr_zero(q0)); }

const FieldTower& TrsParams::tower() const { return FieldTower::shared(m0(), l); }

ParamCheck validate_params(std::uint64_t q0, std::size_t n, std::size_t k,
                           unsigned l) {
  ParamCheck out;
  auto& v = out.violations;
  const i128 N = static_cast<i128>(n), K = static_cast<i128>(k),
             L2 = static_cast<i128>(l) + 2;

  if (!is_power_of_two(q0) || q0 < 4) v.push_back("q0 is a power of two, at least 4");
  if (l < 1) v.push_back("l >= 1");
  if (is_power_of_two(q0) && (l > 6 || (static_cast<unsigned>(std::countr_zero(q0)) << l) > FieldTower::kMaxDegree))
    v.push_back("field degree m0 * 2^l <= 128");
  if (!(k < n)) v.push_back("k < n");
  if (!(N <= static_cast<i128>(q0) - 1)) v.push_back("n <= q0 - 1");
  // 2 sqrt(n) + 6 < k  <=>  k > 6 and 4n < (k-6)^2
  if (!(K > 6 && 4 * N < (K - 6) * (K - 6))) v.push_back("2 sqrt(n) + 6 < k");
  if (!(2 * K <= N - 4)) v.push_back("k <= n/2 - 2");
  // (n+1)/(k - sqrt(n)) < l+2  <=>  k > sqrt(n) and
  // (l+2) sqrt(n) < (l+2) k - (n+1)
  {
    const i128 rhs = L2 * K - (N + 1);
    if (!(K * K > N && rhs > 0 && L2 * L2 * N < rhs * rhs))
      v.push_back("(n+1)/(k - sqrt(n)) < l + 2");
  }
  if (!(L2 < K + 3)) v.push_back("l + 2 < k + 3");
  if (!(L2 * K < 2 * N)) v.push_back("l + 2 < 2n/k");
  // l + 2 < sqrt(n) - 2  <=>  (l+4)^2 < n
  if (!((L2 + 2) * (L2 + 2) < N)) v.push_back("l + 2 < sqrt(n) - 2");
  if (!v.empty()) return out;

  TrsParams p;
  p.q0 = q0;
  p.n = n;
  p.k = k;
  p.l = l;
  p.r = (n + 1 + (l + 2) - 1) / (l + 2) + 2;
  for (std::size_t i = 1; i <= l; ++i) {
    p.t.push_back((i + 1) * (p.r - 2) + 2 - k);
    p.h.push_back(p.r - 1 + i);
  }
  p.I = complement_of_hooks(k, p.h);
  p.strict = true;
  v = range_violations(n, k, p.t, p.h);
  if (v.empty()) out.params = std::move(p);
  return out;
}

TrsParams relaxed_params(std::uint64_t q0, std::size_t n, std::size_t k,
                         std::vector<std::size_t> t, std::vector<std::size_t> h) {
  std::vector<std::string> v = range_violations(n, k, t, h);
  if (!is_power_of_two(q0) || q0 < 4) v.push_back("q0 is a power of two, at least 4");
  if (k < 1 || k > n) v.push_back("1 <= k <= n");
  if (n > q0) v.push_back("n <= q0");
  if (is_power_of_two(q0) &&
      (h.size() > 6 || (static_cast<unsigned>(std::countr_zero(q0)) << h.size()) > FieldTower::kMaxDegree))
    v.push_back("field degree m0 * 2^l <= 128");
  if (!v.empty()) throw Error(Errc::invalid_argument, "relaxed parameters: " + v.front());
  TrsParams p;
  p.q0 = q0;
  p.n = n;
  p.k = k;
  p.l = static_cast<unsigned>(h.size());
  p.t = std::move(t);
  p.h = std::move(h);
  p.I = complement_of_hooks(k, p.h);
  p.strict = false;
  return p;
}

void check_key(const TrsKey& key) {
  const auto& p = key.params;
  const FieldTower& t = key.tower();
  if (key.alpha.size() != p.n) throw Error(Errc::invalid_argument, "need n locators");
  if (key.eta.size() != p.l) throw Error(Errc::invalid_argument, "need l twist coefficients");
  rs::check_locators(t, key.alpha);
  for (unsigned i = 0; i < p.l; ++i) {
    const Elem e = key.eta[i];
    if (e.is_zero()) throw Error(Errc::invalid_argument, "eta must be nonzero");
    if (p.strict && (!t.in_subfield(e, i + 1) || t.in_subfield(e, i)))
      throw Error(Errc::invalid_argument,
                  "eta_" + std::to_string(i + 1) + " not in F_{q_i} \\ F_{q_(i-1)}");
  }
}

Polynomial twisted_encode(const TrsKey& key, std::span<const Elem> f) {
  const auto& p = key.params;
  if (f.size() != p.k) throw Error(Errc::dimension_mismatch, "message length must be k");
  const FieldTower& t = key.tower();
  std::size_t len = p.k;
  for (std::size_t tj : p.t) len = std::max(len, p.k + tj);
  Vec c(len);
  std::copy(f.begin(), f.end(), c.begin());
  for (std::size_t j = 0; j < p.l; ++j)
    c[p.k - 1 + p.t[j]] += t.mul(key.eta[j], f[p.h[j]]);
  return Polynomial(std::move(c));
}

Matrix trs_generator(const TrsKey& key) {
  const auto& p = key.params;
  const FieldTower& t = key.tower();
  Matrix g = rs::generator(t, key.alpha, p.k);
  g.set_level(p.l);
  for (std::size_t j = 0; j < p.l; ++j) {
    auto row = g.row(p.h[j]);
    const std::size_t e = p.k - 1 + p.t[j];
    for (std::size_t c = 0; c < p.n; ++c)
      row[c] += t.mul(key.eta[j], t.pow(key.alpha[c], e));
  }
  return g;
}

TrsKey scale_key(const TrsKey& key, Elem a) {
  const FieldTower& t = key.tower();
  if (a.is_zero()) throw Error(Errc::invalid_argument, "scale factor must be nonzero");
  if (!t.in_subfield(a, 0)) throw Error(Errc::invalid_argument, "scale factor outside F_q0");
  TrsKey out = key;
  for (auto& x : out.alpha) x = t.mul(x, a);
  const Elem ainv = t.inv(a);
  const auto& p = key.params;
  for (std::size_t j = 0; j < p.l; ++j)
    out.eta[j] = t.mul(key.eta[j], t.pow(ainv, p.k - 1 + p.t[j] - p.h[j]));
  return out;
}

// --- TrsDecoder ---------------------------------------------------------------

TrsDecoder::TrsDecoder(const TrsKey& key)
    : key_(key), t_(&key.tower()), syn_(*t_, key.alpha, key.params.k) {
  const auto& p = key.params;
  if (static_cast<std::uint64_t>(t_->degree()) * p.l > kMaxGuessBits)
    throw Error(Errc::instance_too_large,
                "guess space q^l = 2^" + std::to_string(t_->degree() * p.l) +
                    " is beyond the decoder's limit of 2^" +
                    std::to_string(kMaxGuessBits));
  for (std::size_t j = 0; j < p.l; ++j) {
    Vec w = rs::evaluate(*t_, Polynomial::monomial(p.k - 1 + p.t[j], key.eta[j]),
                         key.alpha);
    twist_syndromes_.push_back(syn_.syndrome(w));
    twist_words_.push_back(std::move(w));
  }
}

Elem TrsDecoder::guess_value(std::uint64_t code) const { return Elem{code}; }

Vec TrsDecoder::shifted(std::span<const Elem> y, std::span<const Elem> g) const {
  Vec out(y.begin(), y.end());
  for (std::size_t j = 0; j < g.size(); ++j) t_->axpy(out, twist_words_[j], g[j]);
  return out;
}

std::optional<Vec> TrsDecoder::accept(std::span<const Elem> y, std::span<const Elem> g,
                                      const std::vector<std::size_t>& errors) const {
  Vec ys = shifted(y, g);
  auto res = syn_.correct(ys, errors);
  if (!res) return std::nullopt;
  const auto& p = key_.params;
  for (std::size_t j = 0; j < p.l; ++j)
    if (!(res->message.coeff(p.h[j]) == g[j])) return std::nullopt;
  Vec f(p.k);
  for (std::size_t i = 0; i < p.k; ++i) f[i] = res->message.coeff(i);
  return f;
}

std::optional<Vec> TrsDecoder::operator()(std::span<const Elem> y) const {
  const auto& p = key_.params;
  if (y.size() != p.n) throw Error(Errc::dimension_mismatch, "received word length must be n");
  const unsigned m = t_->degree();
  const std::uint64_t total = std::uint64_t{1} << (m * p.l);
  const std::uint64_t digit_mask = (std::uint64_t{1} << m) - 1;
  const Vec s0 = syn_.syndrome(y);
  const std::size_t rlen = s0.size();
  Vec g(p.l);
  last_guesses_ = 0;

  if (const SmallField* f = syn_.small()) {
    std::vector<std::uint16_t> base(rlen), buf(rlen);
    std::vector<std::vector<std::uint16_t>> u(p.l, std::vector<std::uint16_t>(rlen));
    for (std::size_t i = 0; i < rlen; ++i) base[i] = f->encode(s0[i]);
    for (std::size_t j = 0; j < p.l; ++j)
      for (std::size_t i = 0; i < rlen; ++i) u[j][i] = f->encode(twist_syndromes_[j][i]);
    for (std::uint64_t code = 0; code < total; ++code) {
      buf = base;
      for (std::size_t j = 0; j < p.l; ++j) {
        const auto gj = static_cast<std::uint16_t>((code >> (m * (p.l - 1 - j))) & digit_mask);
        g[j] = guess_value(gj);
        f->axpy(buf.data(), u[j].data(), rlen, gj);
      }
      ++last_guesses_;
      auto pos = syn_.locate(std::span<const std::uint16_t>(buf));
      if (!pos) continue;
      if (auto msg = accept(y, g, *pos)) return msg;
    }
    return std::nullopt;
  }

  Vec s(rlen);
  for (std::uint64_t code = 0; code < total; ++code) {
    s = s0;
    for (std::size_t j = 0; j < p.l; ++j) {
      g[j] = guess_value((code >> (m * (p.l - 1 - j))) & digit_mask);
      t_->axpy(s, twist_syndromes_[j], g[j]);
    }
    ++last_guesses_;
    auto pos = syn_.locate(std::span<const Elem>(s));
    if (!pos) continue;
    if (auto msg = accept(y, g, *pos)) return msg;
  }
  return std::nullopt;
}

std::optional<Vec> TrsDecoder::decode_reference(std::span<const Elem> y) const {
  const auto& p = key_.params;
  if (y.size() != p.n) throw Error(Errc::dimension_mismatch, "received word length must be n");
  const unsigned m = t_->degree();
  const std::uint64_t total = std::uint64_t{1} << (m * p.l);
  const std::uint64_t digit_mask = (std::uint64_t{1} << m) - 1;
  rs::GaoDecoder gao(*t_, key_.alpha, p.k);
  Vec g(p.l);
  last_guesses_ = 0;
  for (std::uint64_t code = 0; code < total; ++code) {
    for (std::size_t j = 0; j < p.l; ++j)
      g[j] = guess_value((code >> (m * (p.l - 1 - j))) & digit_mask);
    ++last_guesses_;
    auto res = gao(shifted(y, g));
    if (!res) continue;
    bool hooks_match = true;
    for (std::size_t j = 0; j < p.l; ++j)
      hooks_match &= res->message.coeff(p.h[j]) == g[j];
    if (!hooks_match) continue;
    Vec f(p.k);
    for (std::size_t i = 0; i < p.k; ++i) f[i] = res->message.coeff(i);
    return f;
  }
  return std::nullopt;
}

std::size_t exhaustive_min_distance(const TrsKey& key) {
  const auto& p = key.params;
  const FieldTower& t = key.tower();
  const unsigned m = t.degree();
  if (static_cast<std::uint64_t>(m) * p.k > 20)
    throw Error(Errc::instance_too_large, "q^k exceeds 2^20");
  const Matrix g = trs_generator(key);
  const std::uint64_t total = std::uint64_t{1} << (m * p.k);
  const std::uint64_t digit_mask = (std::uint64_t{1} << m) - 1;
  std::size_t best = p.n;
  Vec cw(p.n);
  for (std::uint64_t code = 1; code < total; ++code) {
    std::fill(cw.begin(), cw.end(), Elem{});
    for (std::size_t i = 0; i < p.k; ++i)
      t.axpy(cw, g.row(i), Elem{(code >> (m * i)) & digit_mask});
    const auto w = static_cast<std::size_t>(
        std::count_if(cw.begin(), cw.end(), [](Elem x) { return !x.is_zero(); }));
    best = std::min(best, w);
  }
  return best;
}

}  // namespace trs
