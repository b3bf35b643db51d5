#include "trs/attack.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <optional>

#include "trs/detail/field_ops.hpp"
#include "trs/errors.hpp"
#include "trs/rs_codes.hpp"

namespace trs::attack {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t micros_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start)
      .count();
}

template <class V>
bool pairwise_distinct(std::vector<V> v) {
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

// Candidate locators for one value of c = A[0][j] / A[1][j] scaling, or
// nullopt when c is inconsistent with an RS code with unit multipliers.
// a holds the non-identity part of [I | A], K rows of n - K entries.
template <class Ops>
std::optional<std::vector<typename Ops::value_type>> locators_for(
    const Ops& ops, const std::vector<std::vector<typename Ops::value_type>>& a,
    const std::vector<typename Ops::value_type>& ratio01, typename Ops::value_type c,
    std::size_t K, std::size_t n) {
  using V = typename Ops::value_type;
  std::vector<V> al(n);
  al[0] = Ops::zero();
  al[1] = Ops::one();
  // A0j / A1j = c (x - 1) / x  =>  x = c / (c - r).
  for (std::size_t j = 0; j < n - K; ++j) {
    V den = ops.add(c, ratio01[j]);
    if (Ops::is_zero(den)) return std::nullopt;
    al[K + j] = ops.mul(c, ops.inv(den));
  }
  // A0j / Aij = d (x - alpha_i) / x; two columns fix d and alpha_i.
  const V x0 = al[K], x1 = al[K + 1];
  const V dx_inv = ops.inv(ops.add(x0, x1));
  for (std::size_t i = 2; i < K; ++i) {
    V s0 = ops.mul(ops.mul(a[0][0], ops.inv(a[i][0])), x0);
    V s1 = ops.mul(ops.mul(a[0][1], ops.inv(a[i][1])), x1);
    V d = ops.mul(ops.add(s0, s1), dx_inv);
    if (Ops::is_zero(d)) return std::nullopt;
    al[i] = ops.mul(ops.add(ops.mul(d, x0), s0), ops.inv(d));
  }
  if (!pairwise_distinct(al)) return std::nullopt;
  // Unit multipliers: A0j must equal the Lagrange polynomial L_0(alpha_j).
  V d0 = Ops::one();
  for (std::size_t l = 1; l < K; ++l) d0 = ops.mul(d0, al[l]);  // alpha_0 = 0
  const V d0_inv = ops.inv(d0);
  for (std::size_t j = 0; j < std::min<std::size_t>(n - K, 3); ++j) {
    V p = Ops::one();
    for (std::size_t l = 1; l < K; ++l) p = ops.mul(p, ops.add(al[K + j], al[l]));
    if (ops.mul(p, d0_inv) != a[0][j]) return std::nullopt;
  }
  return al;
}

[[noreturn]] void rethrow_with_stage(const char* stage, const Error& e) {
  throw Error(e.code(), std::string(stage) + ": " + e.what());
}

}  // namespace

Vec sidelnikov_shestakov(const Matrix& g, std::size_t K) {
  const FieldTower& t = g.tower();
  const std::size_t n = g.cols();
  if (K < 3 || K + 2 > n)
    throw Error(Errc::invalid_argument, "Sidelnikov-Shestakov needs 3 <= K <= n - 2");
  if (g.level() != 0)
    throw Error(Errc::invalid_argument, "Sidelnikov-Shestakov expects a base-field matrix");
  auto red = linalg::rref(g);
  if (red.rank != K) throw Error(Errc::not_an_rs_code, "generator rank differs from K");
  for (std::size_t i = 0; i < K; ++i)
    if (red.pivots[i] != i)
      throw Error(Errc::not_an_rs_code, "first K columns are not an information set");

  const Vec field = t.base_field_elements();
  std::optional<Vec> found;
  detail::with_ops(t, 0, [&](const auto& ops) {
    using Ops = std::decay_t<decltype(ops)>;
    using V = typename Ops::value_type;
    std::vector<std::vector<V>> a(K, std::vector<V>(n - K));
    for (std::size_t i = 0; i < K; ++i)
      for (std::size_t j = 0; j < n - K; ++j) {
        a[i][j] = ops.encode(red.reduced(i, K + j));
        if (Ops::is_zero(a[i][j]))
          throw Error(Errc::not_an_rs_code, "systematic generator has a zero entry");
      }
    std::vector<V> ratio01(n - K);
    for (std::size_t j = 0; j < n - K; ++j) ratio01[j] = ops.mul(a[0][j], ops.inv(a[1][j]));

    for (Elem ce : field) {
      if (ce.is_zero()) continue;
      auto al = locators_for(ops, a, ratio01, ops.encode(ce), K, n);
      if (!al) continue;
      Vec alpha = detail::decode_all(ops, *al);
      if (linalg::rowspace_equal(red.reduced, rs::generator(t, alpha, K))) {
        found = std::move(alpha);
        return;
      }
    }
  });
  if (!found) throw Error(Errc::not_an_rs_code, "no locator set reproduces the code");
  return *found;
}

AffineStage recover_locators_affine(const PublicKey& pk) {
  const auto& p = pk.params;
  AffineStage out;
  auto start = Clock::now();
  out.g_sub = rs::subfield_subcode(pk.g_pub);
  out.us_subfield = micros_since(start);
  if (out.g_sub.rows() != p.k - p.l)
    throw Error(Errc::unexpected_dimension,
                "subfield subcode has dimension " + std::to_string(out.g_sub.rows()) +
                    ", expected " + std::to_string(p.k - p.l));
  start = Clock::now();
  out.g_sq = rs::schur_square(out.g_sub);
  out.us_square = micros_since(start);
  if (out.g_sq.rows() != 2 * p.k - 1)
    throw Error(Errc::unexpected_dimension,
                "Schur square has rank " + std::to_string(out.g_sq.rows()) +
                    ", expected " + std::to_string(2 * p.k - 1));
  start = Clock::now();
  out.alpha_prime = sidelnikov_shestakov(out.g_sq, 2 * p.k - 1);
  out.us_ss = micros_since(start);
  return out;
}

ShiftResult find_shift(std::span<const Elem> alpha_prime, const Matrix& target,
                       const TrsParams& params) {
  const FieldTower& t = target.tower();
  const std::size_t n = alpha_prime.size();
  if (target.cols() != n) throw Error(Errc::dimension_mismatch, "locator count differs from n");
  const Matrix h = linalg::right_kernel(target);
  ShiftResult res;

  detail::with_ops(t, h.level(), [&](const auto& ops) {
    using Ops = std::decay_t<decltype(ops)>;
    using V = typename Ops::value_type;
    std::vector<std::vector<V>> hrows(h.rows());
    for (std::size_t r = 0; r < h.rows(); ++r)
      for (Elem x : h.row(r)) hrows[r].push_back(ops.encode(x));

    // (X + b)^i stays in Span{X^j : j <= i} for i below the first hook, so
    // wrong shifts only show up above it. Test those degrees first.
    std::vector<std::size_t> order;
    const std::size_t h0 = params.h.empty() ? 0 : params.h.front();
    for (std::size_t i : params.I)
      if (i > h0) order.push_back(i);
    for (std::size_t i : params.I)
      if (i < h0) order.push_back(i);

    std::vector<V> shifted(n), pw(n);
    for (Elem b : t.base_field_elements()) {
      for (std::size_t c = 0; c < n; ++c) shifted[c] = ops.encode(alpha_prime[c] + b);
      std::size_t deg = std::numeric_limits<std::size_t>::max();
      bool ok = true;
      for (std::size_t i : order) {
        if (deg > i) {
          std::fill(pw.begin(), pw.end(), Ops::one());
          deg = 0;
        }
        for (; deg < i; ++deg)
          for (std::size_t c = 0; c < n; ++c) pw[c] = ops.mul(pw[c], shifted[c]);
        for (const auto& hr : hrows) {
          V acc = Ops::zero();
          for (std::size_t c = 0; c < n; ++c) acc = ops.add(acc, ops.mul(pw[c], hr[c]));
          if (!Ops::is_zero(acc)) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
      }
      if (ok) res.accepted.push_back(b);
    }
  });

  if (res.accepted.empty())
    throw Error(Errc::no_shift_found, "no shift b puts the monomial code inside the target");
  res.b = res.accepted.front();
  res.alpha_hat.resize(n);
  for (std::size_t c = 0; c < n; ++c) res.alpha_hat[c] = alpha_prime[c] + res.b;
  return res;
}

Vec recover_eta(const PublicKey& pk, std::span<const Elem> alpha_hat) {
  const auto& p = pk.params;
  const FieldTower& t = p.tower();
  rs::Interpolator interp(t, Vec(alpha_hat.begin(), alpha_hat.end()));
  Vec eta(p.l);
  std::vector<bool> done(p.l, false);
  std::size_t remaining = p.l;
  for (std::size_t r = 0; r < pk.g_pub.rows() && remaining > 0; ++r) {
    const Polynomial poly = interp(pk.g_pub.row(r));
    for (std::size_t j = 0; j < p.l; ++j) {
      if (done[j]) continue;
      const Elem hook = poly.coeff(p.h[j]);
      if (hook.is_zero()) continue;
      eta[j] = t.div(poly.coeff(p.k - 1 + p.t[j]), hook);
      done[j] = true;
      --remaining;
    }
  }
  if (remaining > 0)
    throw Error(Errc::eta_unresolved, "every public row has a zero hook coefficient");
  return eta;
}

Matrix recover_S(const PublicKey& pk, std::span<const Elem> alpha_hat,
                 std::span<const Elem> eta_hat) {
  TrsKey key{pk.params, Vec(alpha_hat.begin(), alpha_hat.end()),
             Vec(eta_hat.begin(), eta_hat.end())};
  return linalg::solve_left(trs_generator(key), pk.g_pub);
}

RecoveredKey recover_key(const PublicKey& pk) {
  const auto& p = pk.params;
  const auto start = Clock::now();
  RecoveredKey out;

  AffineStage affine;
  try {
    affine = recover_locators_affine(pk);
  } catch (const Error& e) {
    rethrow_with_stage("locators", e);
  }
  out.alpha_prime = affine.alpha_prime;
  out.dim_sub = affine.g_sub.rows();
  out.rank_sq = affine.g_sq.rows();
  out.us.subfield_subcode = affine.us_subfield;
  out.us.square = affine.us_square;
  out.us.sidelnikov_shestakov = affine.us_ss;

  auto t0 = Clock::now();
  ShiftResult shift;
  try {
    shift = find_shift(affine.alpha_prime, affine.g_sub, p);
  } catch (const Error& e) {
    rethrow_with_stage("shift search", e);
  }
  out.us.shift_search = micros_since(t0);
  out.b = shift.b;
  out.accepted_shifts = shift.accepted;

  t0 = Clock::now();
  Vec eta;
  try {
    eta = recover_eta(pk, shift.alpha_hat);
  } catch (const Error& e) {
    rethrow_with_stage("eta", e);
  }
  out.us.eta = micros_since(t0);

  t0 = Clock::now();
  TrsKey key{p, shift.alpha_hat, eta};
  Matrix s;
  try {
    check_key(key);
    const Matrix g_hat = trs_generator(key);
    s = linalg::solve_left(g_hat, pk.g_pub);
    if (!(linalg::multiply(s, g_hat) == pk.g_pub))
      throw Error(Errc::verification_failed, "S_hat * G_hat differs from G_pub");
    if (linalg::rank(s) != p.k)
      throw Error(Errc::verification_failed, "S_hat is singular");
  } catch (const Error& e) {
    rethrow_with_stage("solve S", e);
  }
  out.us.solve_s = micros_since(t0);
  out.us.total = micros_since(start);
  out.key = PrivateKey{std::move(s), std::move(key)};
  return out;
}

}  // namespace trs::attack
