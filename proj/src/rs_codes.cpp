#include "trs/rs_codes.hpp"

#include <algorithm>
#include <type_traits>

#include "trs/detail/field_ops.hpp"
#include "trs/errors.hpp"

namespace trs {

// --- Polynomial -------------------------------------------------------------

Polynomial::Polynomial(Vec coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::monomial(std::size_t degree, Elem c) {
  Vec v(degree + 1);
  v[degree] = c;
  return Polynomial(std::move(v));
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Elem Polynomial::eval(const FieldTower& t, Elem x) const {
  Elem acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = t.mul(acc, x) + *it;
  return acc;
}

namespace poly {

Polynomial add(const Polynomial& a, const Polynomial& b) {
  Vec out(std::max(a.coeffs().size(), b.coeffs().size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) + b.coeff(i);
  return Polynomial(std::move(out));
}

Polynomial mul(const FieldTower& t, const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  Vec out(a.coeffs().size() + b.coeffs().size() - 1);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    t.axpy(std::span(out).subspan(i, b.coeffs().size()), b.coeffs(),
           a.coeffs()[i]);
  return Polynomial(std::move(out));
}

Polynomial scale(const FieldTower& t, const Polynomial& a, Elem s) {
  Vec out(a.coeffs().size());
  t.axpy(out, a.coeffs(), s);
  return Polynomial(std::move(out));
}

DivMod divmod(const FieldTower& t, const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw Error(Errc::division_by_zero, "polynomial division by zero");
  if (a.degree() < b.degree()) return {Polynomial{}, a};
  Vec rem = a.coeffs();
  const Vec& d = b.coeffs();
  const std::size_t db = d.size() - 1;
  const Elem lead_inv = t.inv(d.back());
  Vec quot(rem.size() - db);
  for (std::size_t i = quot.size(); i-- > 0;) {
    Elem c = t.mul(rem[i + db], lead_inv);
    quot[i] = c;
    if (!c.is_zero()) t.axpy(std::span(rem).subspan(i, d.size()), d, c);
  }
  rem.resize(db);
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial from_roots(const FieldTower& t, std::span<const Elem> roots) {
  Vec c{t.one()};
  for (Elem r : roots) {
    // multiply by (X + r)
    c.push_back(Elem{});
    for (std::size_t i = c.size() - 1; i > 0; --i) c[i] = c[i - 1] + t.mul(c[i], r);
    c[0] = t.mul(c[0], r);
  }
  return Polynomial(std::move(c));
}

}  // namespace poly

namespace rs {

namespace {

std::size_t weight(std::span<const Elem> v) {
  return static_cast<std::size_t>(
      std::count_if(v.begin(), v.end(), [](Elem x) { return !x.is_zero(); }));
}

void check_k(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) throw Error(Errc::invalid_argument, "dimension k out of range");
}

// Accepts f if ev(f) is within the decoding radius of y.
std::optional<DecodeResult> finish(const FieldTower& t, std::span<const Elem> alpha,
                                   std::size_t k, std::span<const Elem> y,
                                   Polynomial f) {
  if (f.degree() >= static_cast<int>(k)) return std::nullopt;
  Vec e = evaluate(t, f, alpha);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = e[i] + y[i];
  if (weight(e) > decoding_radius(alpha.size(), k)) return std::nullopt;
  return DecodeResult{std::move(f), std::move(e)};
}

}  // namespace

void check_locators(const FieldTower& t, std::span<const Elem> alpha) {
  Vec sorted(alpha.begin(), alpha.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(Errc::invalid_argument, "locators are not distinct");
  for (Elem a : alpha)
    if (!t.in_subfield(a, 0))
      throw Error(Errc::invalid_argument, "locator outside the base field");
}

Matrix generator(const FieldTower& t, std::span<const Elem> alpha, std::size_t k) {
  check_k(alpha.size(), k);
  Matrix g(t, k, alpha.size(), 0);
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    Elem p = t.one();
    for (std::size_t i = 0; i < k; ++i) {
      g(i, j) = p;
      p = t.mul(p, alpha[j]);
    }
  }
  return g;
}

Vec evaluate(const FieldTower& t, const Polynomial& f, std::span<const Elem> alpha) {
  Vec out(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) out[i] = f.eval(t, alpha[i]);
  return out;
}

Interpolator::Interpolator(const FieldTower& t, Vec alpha)
    : t_(&t), alpha_(std::move(alpha)) {
  const std::size_t n = alpha_.size();
  basis_.assign(n * n, Elem{});
  if (n == 0) return;
  const Polynomial vanishing = poly::from_roots(t, alpha_);
  const Vec& m = vanishing.coeffs();  // degree n, monic
  Vec q(n);
  for (std::size_t i = 0; i < n; ++i) {
    // q = m / (X - alpha_i) by synthetic division
    q[n - 1] = m[n];
    for (std::size_t j = n - 1; j > 0; --j) q[j - 1] = m[j] + t.mul(alpha_[i], q[j]);
    Elem denom;
    for (std::size_t j = n; j-- > 0;) denom = t.mul(denom, alpha_[i]) + q[j];
    Elem w = t.inv(denom);
    t.axpy(std::span(basis_).subspan(i * n, n), q, w);
  }
}

Polynomial Interpolator::operator()(std::span<const Elem> y) const {
  const std::size_t n = alpha_.size();
  if (y.size() != n) throw Error(Errc::dimension_mismatch, "interpolate: length mismatch");
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!y[i].is_zero())
      t_->axpy(out, std::span(basis_).subspan(i * n, n), y[i]);
  return Polynomial(std::move(out));
}

Polynomial interpolate(const FieldTower& t, std::span<const Elem> alpha,
                       std::span<const Elem> y) {
  return Interpolator(t, Vec(alpha.begin(), alpha.end()))(y);
}

std::optional<DecodeResult> decode_bw(const FieldTower& t,
                                      std::span<const Elem> alpha, std::size_t k,
                                      std::span<const Elem> y) {
  const std::size_t n = alpha.size();
  check_k(n, k);
  if (y.size() != n) throw Error(Errc::dimension_mismatch, "decode: length mismatch");
  const std::size_t tau = decoding_radius(n, k);
  // Unknowns: Q_0..Q_{tau+k-1}, e_0..e_{tau-1} with E = X^tau + sum e_j X^j.
  // Equation i: Q(a_i) + y_i (E(a_i) - a_i^tau) = y_i a_i^tau.
  const std::size_t nq = tau + k;
  Matrix a(t, nq + tau, n);
  Matrix b(t, 1, n);
  for (std::size_t i = 0; i < n; ++i) {
    Elem p = t.one();
    for (std::size_t j = 0; j < nq; ++j) {
      a(j, i) = p;
      if (j < tau) a(nq + j, i) = t.mul(y[i], p);
      if (j == tau) b(0, i) = t.mul(y[i], p);
      p = t.mul(p, alpha[i]);
    }
  }
  Matrix x;
  try {
    x = linalg::solve_left(a, b);
  } catch (const Error& e) {
    if (e.code() == Errc::no_solution) return std::nullopt;
    throw;
  }
  Vec qc(nq), ec(tau + 1);
  for (std::size_t j = 0; j < nq; ++j) qc[j] = x(0, j);
  for (std::size_t j = 0; j < tau; ++j) ec[j] = x(0, nq + j);
  ec[tau] = t.one();
  auto [f, r] = poly::divmod(t, Polynomial(std::move(qc)), Polynomial(std::move(ec)));
  if (!r.is_zero()) return std::nullopt;
  return finish(t, alpha, k, y, std::move(f));
}

GaoDecoder::GaoDecoder(const FieldTower& t, Vec alpha, std::size_t k)
    : t_(&t), alpha_(alpha), k_(k), g0_(poly::from_roots(t, alpha)),
      interp_(t, std::move(alpha)) {
  check_k(alpha_.size(), k);
}

std::optional<DecodeResult> GaoDecoder::operator()(std::span<const Elem> y) const {
  const FieldTower& t = *t_;
  const int n = static_cast<int>(alpha_.size());
  const int k = static_cast<int>(k_);
  if (y.size() != alpha_.size())
    throw Error(Errc::dimension_mismatch, "decode: length mismatch");
  Polynomial r0 = g0_, r1 = interp_(y);
  if (r1.degree() < k) return finish(t, alpha_, k_, y, std::move(r1));
  Polynomial v0, v1 = Polynomial::constant(t.one());
  while (2 * r1.degree() >= n + k) {
    auto [q, r] = poly::divmod(t, r0, r1);
    Polynomial v = poly::add(v0, poly::mul(t, q, v1));
    r0 = std::move(r1);
    r1 = std::move(r);
    v0 = std::move(v1);
    v1 = std::move(v);
  }
  auto [f, rem] = poly::divmod(t, r1, v1);
  if (!rem.is_zero()) return std::nullopt;
  return finish(t, alpha_, k_, y, std::move(f));
}

DecodeResult decode(const FieldTower& t, std::span<const Elem> alpha,
                    std::size_t k, std::span<const Elem> y) {
  auto r = GaoDecoder(t, Vec(alpha.begin(), alpha.end()), k)(y);
  if (!r) throw Error(Errc::decoding_failure, "no codeword within the decoding radius");
  return std::move(*r);
}

// --- SyndromeDecoder --------------------------------------------------------

SyndromeDecoder::SyndromeDecoder(const FieldTower& t, Vec alpha, std::size_t k)
    : t_(&t), small_(t.small_top()), alpha_(std::move(alpha)), k_(k) {
  const std::size_t n = alpha_.size();
  if (k < 1 || k >= n) throw Error(Errc::invalid_argument, "need 1 <= k < n");
  tau_ = decoding_radius(n, k);
  parity_ = Matrix(t, n - k, n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    Elem d = t.one();
    for (std::size_t l = 0; l < n; ++l)
      if (l != i) d = t.mul(d, alpha_[i] + alpha_[l]);
    Elem p = t.inv(d);
    for (std::size_t j = 0; j < n - k; ++j) {
      parity_(j, i) = p;
      p = t.mul(p, alpha_[i]);
    }
  }
  if (small_) {
    alpha_codes_.resize(n);
    for (std::size_t i = 0; i < n; ++i) alpha_codes_[i] = small_->encode(alpha_[i]);
    base_log_step_ = (small_->order() - 1) / ((1u << t.base_degree()) - 1);
  }
}

Vec SyndromeDecoder::syndrome(std::span<const Elem> y) const {
  if (y.size() != n()) throw Error(Errc::dimension_mismatch, "syndrome: length mismatch");
  Vec s(redundancy());
  for (std::size_t j = 0; j < s.size(); ++j) {
    Elem acc;
    auto row = parity_.row(j);
    for (std::size_t i = 0; i < y.size(); ++i)
      if (!y[i].is_zero()) acc += t_->mul(row[i], y[i]);
    s[j] = acc;
  }
  return s;
}

template <class Ops>
std::optional<std::vector<std::size_t>> SyndromeDecoder::locate_impl(
    const Ops& ops, std::span<const typename Ops::value_type> s) const {
  using V = typename Ops::value_type;
  const std::size_t big_n = s.size();
  // Berlekamp-Massey; C is the connection polynomial, L its register length.
  std::vector<V> c(big_n + 2, Ops::zero()), b(big_n + 2, Ops::zero()), tmp;
  c[0] = b[0] = Ops::one();
  std::size_t len = 0, shift = 1;
  std::size_t blen = 0;  // deg B <= blen
  V bd = Ops::one();
  for (std::size_t j = 0; j < big_n; ++j) {
    V d = s[j];
    for (std::size_t i = 1; i <= len; ++i)
      if (!Ops::is_zero(c[i])) d = ops.add(d, ops.mul(c[i], s[j - i]));
    if (Ops::is_zero(d)) {
      ++shift;
      continue;
    }
    V coef = ops.mul(d, ops.inv(bd));
    const std::size_t span = std::min(blen + 1, big_n + 2 - shift);
    if (2 * len <= j) {
      tmp.assign(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(len + 1));
      ops.axpy(c.data() + shift, b.data(), span, coef);
      const std::size_t old_len = len;
      len = j + 1 - len;
      if (len > tau_) return std::nullopt;
      std::copy(tmp.begin(), tmp.end(), b.begin());
      std::fill(b.begin() + static_cast<std::ptrdiff_t>(old_len + 1),
                b.begin() + static_cast<std::ptrdiff_t>(blen + 1 > old_len + 1 ? blen + 1 : old_len + 1),
                Ops::zero());
      blen = old_len;
      bd = d;
      shift = 1;
    } else {
      ops.axpy(c.data() + shift, b.data(), span, coef);
      ++shift;
    }
  }
  // sigma(z) = z^L C(1/z) has the error locators as roots.
  std::vector<V> sigma(len + 1);
  for (std::size_t j = 0; j <= len; ++j) sigma[j] = c[len - j];
  for (V x : sigma) {
    bool in_base;
    if constexpr (std::is_same_v<V, Elem>)
      in_base = t_->in_subfield(x, 0);
    else
      in_base = x == 0 || small_->log(x) % base_log_step_ == 0;
    if (!in_base) return std::nullopt;
  }
  std::vector<std::size_t> pos;
  for (std::size_t i = 0; i < n() && pos.size() <= len; ++i) {
    V a;
    if constexpr (std::is_same_v<V, Elem>)
      a = alpha_[i];
    else
      a = alpha_codes_[i];
    V acc = Ops::zero();
    for (std::size_t j = len + 1; j-- > 0;) acc = ops.add(ops.mul(acc, a), sigma[j]);
    if (Ops::is_zero(acc)) pos.push_back(i);
  }
  if (pos.size() != len) return std::nullopt;
  return pos;
}

std::optional<std::vector<std::size_t>> SyndromeDecoder::locate(
    std::span<const Elem> s) const {
  if (s.size() != redundancy())
    throw Error(Errc::dimension_mismatch, "syndrome length mismatch");
  return locate_impl(detail::TowerOps{t_}, s);
}

std::optional<std::vector<std::size_t>> SyndromeDecoder::locate(
    std::span<const std::uint16_t> s) const {
  if (!small_) throw Error(Errc::invalid_argument, "no 16-bit top field");
  if (s.size() != redundancy())
    throw Error(Errc::dimension_mismatch, "syndrome length mismatch");
  return locate_impl(detail::SmallOps{small_}, s);
}

std::optional<DecodeResult> SyndromeDecoder::correct(
    std::span<const Elem> y, const std::vector<std::size_t>& errors) const {
  std::vector<bool> bad(n(), false);
  for (std::size_t p : errors) bad.at(p) = true;
  Vec xs, ys;
  for (std::size_t i = 0; i < n() && xs.size() < k_; ++i)
    if (!bad[i]) {
      xs.push_back(alpha_[i]);
      ys.push_back(y[i]);
    }
  if (xs.size() < k_) return std::nullopt;
  return finish(*t_, alpha_, k_, y, interpolate(*t_, xs, ys));
}

std::optional<DecodeResult> SyndromeDecoder::operator()(std::span<const Elem> y) const {
  Vec s = syndrome(y);
  std::optional<std::vector<std::size_t>> pos;
  if (small_) {
    std::vector<std::uint16_t> codes(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) codes[j] = small_->encode(s[j]);
    pos = locate(std::span<const std::uint16_t>(codes));
  } else {
    pos = locate(std::span<const Elem>(s));
  }
  if (!pos) return std::nullopt;
  return correct(y, *pos);
}

// --- Schur square and subfield subcode ---------------------------------------

Matrix schur_square(const Matrix& g) {
  const FieldTower& t = g.tower();
  const std::size_t n = g.cols();
  auto base = linalg::rref(g);
  const std::size_t d = base.rank;
  const std::size_t cap = std::min(n, d * (d + 1) / 2);
  Matrix out(t, 0, n, g.level());
  if (d == 0) return out;
  detail::with_ops(t, g.level(), [&](const auto& ops) {
    using Ops = std::decay_t<decltype(ops)>;
    using V = typename Ops::value_type;
    std::vector<std::vector<V>> rows(d);
    for (std::size_t i = 0; i < d; ++i)
      for (Elem x : base.reduced.row(i)) rows[i].push_back(ops.encode(x));
    std::vector<std::vector<V>> basis;
    std::vector<std::size_t> pivots;
    std::vector<V> v(n);
    for (std::size_t i = 0; i < d && basis.size() < cap; ++i)
      for (std::size_t j = i; j < d && basis.size() < cap; ++j) {
        for (std::size_t c = 0; c < n; ++c) v[c] = ops.mul(rows[i][c], rows[j][c]);
        for (std::size_t r = 0; r < basis.size(); ++r) {
          V s = v[pivots[r]];
          if (!Ops::is_zero(s)) ops.axpy(v.data(), basis[r].data(), n, s);
        }
        std::size_t p = 0;
        while (p < n && Ops::is_zero(v[p])) ++p;
        if (p == n) continue;
        ops.scale(v.data(), n, ops.inv(v[p]));
        for (auto& row : basis) {
          V s = row[p];
          if (!Ops::is_zero(s)) ops.axpy(row.data(), v.data(), n, s);
        }
        basis.push_back(v);
        pivots.push_back(p);
      }
    Matrix m(t, basis.size(), n, g.level());
    for (std::size_t r = 0; r < basis.size(); ++r)
      for (std::size_t c = 0; c < n; ++c) m(r, c) = ops.decode(basis[r][c]);
    out = linalg::rref(m).reduced;
  });
  return out;
}

Matrix subfield_subcode(const Matrix& g) {
  const FieldTower& t = g.tower();
  const std::size_t n = g.cols();
  Matrix h = linalg::right_kernel(g);
  const std::size_t ext = t.base_basis().size();
  Matrix e(t, h.rows() * ext, n, 0);
  Vec coords(ext);
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j) {
      t.expand_base_into(h(i, j), coords);
      for (std::size_t c = 0; c < ext; ++c) e(i * ext + c, j) = coords[c];
    }
  if (e.rows() == 0) return Matrix::identity(t, n);
  return linalg::right_kernel(e);
}

}  // namespace rs

}  // namespace trs
