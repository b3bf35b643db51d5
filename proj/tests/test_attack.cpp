#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "trs/attack.hpp"
#include "trs/errors.hpp"
#include "trs/rs_codes.hpp"

using namespace trs;

namespace {

Vec random_locators(const FieldTower& t, std::size_t n, Rng& rng) {
  Vec all = t.base_field_elements();
  for (std::size_t i = 0; i < n; ++i)
    std::swap(all[i], all[i + uniform_below(rng, all.size() - i)]);
  all.resize(n);
  return all;
}

Elem random_nonzero(const FieldTower& t, unsigned level, Rng& rng) {
  Elem x;
  do x = t.sample_subfield(level, rng);
  while (x.is_zero());
  return x;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::invalid_argument;  // sentinel: nothing thrown
}

struct Affine {
  Elem a, b;
};

// Fits alpha' = a alpha + b on the first two coordinates and checks all n.
std::optional<Affine> affine_fit(const FieldTower& t, std::span<const Elem> alpha,
                                 std::span<const Elem> alpha_prime) {
  Elem a = t.div(alpha_prime[0] + alpha_prime[1], alpha[0] + alpha[1]);
  Elem b = alpha_prime[0] + t.mul(a, alpha[0]);
  if (a.is_zero()) return std::nullopt;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha_prime[i] != t.mul(a, alpha[i]) + b) return std::nullopt;
  return Affine{a, b};
}

}  // namespace

TEST_CASE("Sidelnikov-Shestakov over F_8") {
  const FieldTower& t = FieldTower::shared(3, 0);
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Vec alpha = random_locators(t, 7, rng);
    Matrix g = rs::generator(t, alpha, 3);
    Vec ap = attack::sidelnikov_shestakov(g, 3);
    CHECK(ap[0] == Elem{0});
    CHECK(ap[1] == Elem{1});
    CHECK(linalg::rowspace_equal(g, rs::generator(t, ap, 3)));
    // Exhaustive search over F_8^2 for the affine map.
    int hits = 0;
    for (Elem a : t.base_field_elements())
      for (Elem b : t.base_field_elements()) {
        if (a.is_zero()) continue;
        bool ok = true;
        for (std::size_t i = 0; i < 7; ++i) ok = ok && ap[i] == t.mul(a, alpha[i]) + b;
        hits += ok;
      }
    CHECK(hits == 1);
  }
}

TEST_CASE("Sidelnikov-Shestakov sees the affine orbit as one code") {
  const FieldTower& t = FieldTower::shared(8, 0);
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    Vec alpha = random_locators(t, 40, rng);
    Elem a = random_nonzero(t, 0, rng), b = t.sample_subfield(0, rng);
    Vec moved(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) moved[i] = t.mul(a, alpha[i]) + b;
    Matrix g1 = rs::generator(t, alpha, 12), g2 = rs::generator(t, moved, 12);
    CHECK(linalg::rowspace_equal(g1, g2));
    CHECK(attack::sidelnikov_shestakov(g1, 12) == attack::sidelnikov_shestakov(g2, 12));
  }
}

TEST_CASE("Sidelnikov-Shestakov on random RS codes over F_2^7 and F_2^8") {
  Rng rng(5);
  for (unsigned m0 : {7u, 8u}) {
    const FieldTower& t = FieldTower::shared(m0, 0);
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 5 + uniform_below(rng, (1u << m0) - 5);
      const std::size_t K = 3 + uniform_below(rng, n - 4);
      Vec alpha = random_locators(t, n, rng);
      Matrix g = rs::generator(t, alpha, K);
      Vec ap = attack::sidelnikov_shestakov(g, K);
      CHECK(linalg::rowspace_equal(g, rs::generator(t, ap, K)));
      CHECK(affine_fit(t, alpha, ap).has_value());
    }
  }
}

TEST_CASE("Sidelnikov-Shestakov rejects codes that are not RS") {
  const FieldTower& t = FieldTower::shared(8, 0);
  Rng rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix g(t, 10, 30, 0);
    do {
      for (auto& x : g.data()) x = t.sample_subfield(0, rng);
    } while (linalg::rank(g) != 10);
    CHECK(code_of([&] { attack::sidelnikov_shestakov(g, 10); }) == Errc::not_an_rs_code);
  }
  // GRS with non-unit column multipliers is not an RS code on any locators.
  Vec alpha = random_locators(t, 30, rng);
  Matrix g = rs::generator(t, alpha, 10);
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, 29) = t.mul(g(i, 29), Elem{2});
  CHECK(code_of([&] { attack::sidelnikov_shestakov(g, 10); }) == Errc::not_an_rs_code);
  CHECK(code_of([&] { attack::sidelnikov_shestakov(g, 2); }) == Errc::invalid_argument);
}

TEST_CASE("attack stages on planted keys at (2^7, 127, 60, 1)") {
  const TrsParams p = *validate_params(128, 127, 60, 1).params;
  const FieldTower& t = p.tower();
  Rng rng(7);
  for (int trial = 0; trial < 3; ++trial) {
    KeyPair kp = keygen(p, rng);
    const Vec& alpha = kp.priv.key.alpha;

    attack::AffineStage st = attack::recover_locators_affine(kp.pub);
    CHECK(st.g_sub.rows() == 59);
    CHECK(st.g_sq.rows() == 119);
    CHECK(linalg::rowspace_equal(st.g_sq, rs::generator(t, alpha, 119)));
    auto fit = affine_fit(t, alpha, st.alpha_prime);
    REQUIRE(fit.has_value());

    attack::ShiftResult sh = attack::find_shift(st.alpha_prime, st.g_sub, p);
    CHECK(sh.b == fit->b);
    CHECK(sh.accepted.size() == 1);
    for (std::size_t i = 0; i < p.n; ++i) CHECK(sh.alpha_hat[i] == t.mul(fit->a, alpha[i]));
    // The public-code containment accepts the same shift.
    CHECK(attack::find_shift(st.alpha_prime, kp.pub.g_pub, p).accepted == sh.accepted);

    // eta scales as eta * a^-(k-1+t-h).
    Vec eta = attack::recover_eta(kp.pub, sh.alpha_hat);
    const std::size_t e = p.k - 1 + p.t[0] - p.h[0];
    CHECK(eta[0] == t.mul(kp.priv.key.eta[0], t.inv(t.pow(fit->a, e))));
    CHECK(eta == scale_key(kp.priv.key, fit->a).eta);

    Matrix s = attack::recover_S(kp.pub, sh.alpha_hat, eta);
    TrsKey rk{p, sh.alpha_hat, eta};
    CHECK(linalg::multiply(s, trs_generator(rk)) == kp.pub.g_pub);
  }
}

TEST_CASE("shift search rejects a corrupted locator") {
  const TrsParams p = *validate_params(128, 127, 60, 1).params;
  Rng rng(8);
  KeyPair kp = keygen(p, rng);
  attack::AffineStage st = attack::recover_locators_affine(kp.pub);
  Vec bad = st.alpha_prime;
  // Move one locator onto an unused field element.
  for (Elem x : p.tower().base_field_elements())
    if (std::find(bad.begin(), bad.end(), x) == bad.end()) {
      bad[5] = x;
      break;
    }
  CHECK(code_of([&] { attack::find_shift(bad, st.g_sub, p); }) == Errc::no_shift_found);
}

TEST_CASE("eta recovery with the true locators returns the true eta") {
  const TrsParams p = *validate_params(128, 127, 60, 1).params;
  Rng rng(9);
  KeyPair kp = keygen(p, rng);
  CHECK(attack::recover_eta(kp.pub, kp.priv.key.alpha) == kp.priv.key.eta);

  // Interpolated public rows vanish between k and k-1+t outside the twist.
  const FieldTower& t = p.tower();
  rs::Interpolator interp(t, kp.priv.key.alpha);
  for (std::size_t r = 0; r < 5; ++r) {
    Polynomial f = interp(kp.pub.g_pub.row(r));
    CHECK(f.degree() <= static_cast<long>(p.k - 1 + p.t[0]));
    for (std::size_t d = p.k; d < p.k - 1 + p.t[0]; ++d) CHECK(f.coeff(d).is_zero());
  }
}

TEST_CASE("S recovery") {
  const TrsParams p = *validate_params(128, 127, 60, 1).params;
  Rng rng(10);
  KeyPair kp = keygen(p, rng);
  const TrsKey& key = kp.priv.key;
  PublicKey plain{p, trs_generator(key)};
  CHECK(attack::recover_S(plain, key.alpha, key.eta) == Matrix::identity(p.tower(), p.k));
  CHECK(attack::recover_S(kp.pub, key.alpha, key.eta) == kp.priv.s);
  Vec eta = key.eta;
  eta[0] += Elem{1};
  CHECK(code_of([&] { attack::recover_S(kp.pub, key.alpha, eta); }) == Errc::no_solution);
}

TEST_CASE("full key recovery decrypts fresh ciphertexts") {
  Rng rng(11);
  for (auto [q0, n, k, l] : {std::tuple{128, 127, 60, 1}, std::tuple{256, 255, 117, 1}}) {
    const TrsParams p = *validate_params(q0, n, k, l).params;
    KeyPair kp = keygen(p, rng);
    attack::RecoveredKey rk = attack::recover_key(kp.pub);
    CHECK(rk.dim_sub == p.k - p.l);
    CHECK(rk.rank_sq == 2 * p.k - 1);
    CHECK(linalg::multiply(rk.key.s, trs_generator(rk.key.key)) == kp.pub.g_pub);
    Decryptor dec(rk.key);
    for (int i = 0; i < 3; ++i) {
      Vec m(p.k);
      for (auto& x : m) x = p.tower().sample_subfield(p.l, rng);
      CHECK(dec(encrypt(m, kp.pub, rng)) == m);
    }
  }
}

TEST_CASE("full key recovery at l = 2") {
  Rng rng(12);
  const TrsParams p = *validate_params(256, 255, 117, 2).params;
  KeyPair kp = keygen(p, rng);
  attack::RecoveredKey rk = attack::recover_key(kp.pub);
  CHECK(rk.dim_sub == 115);
  CHECK(rk.rank_sq == 233);
  CHECK(linalg::multiply(rk.key.s, trs_generator(rk.key.key)) == kp.pub.g_pub);
}

TEST_CASE("attack errors carry the stage") {
  // A random public matrix has a trivial subfield subcode.
  const TrsParams p = *validate_params(128, 127, 60, 1).params;
  Rng rng(13);
  PublicKey pk{p, Matrix(p.tower(), p.k, p.n)};
  for (auto& x : pk.g_pub.data()) x = p.tower().sample_subfield(1, rng);
  try {
    attack::recover_key(pk);
    FAIL("attack on a random matrix succeeded");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unexpected_dimension);
    CHECK(std::string(e.what()).rfind("locators: ", 0) == 0);
  }
}
