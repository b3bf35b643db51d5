#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "trs/cryptosystem.hpp"
#include "trs/errors.hpp"

using namespace trs;

namespace {

TrsParams params_128() { return *validate_params(128, 127, 60, 1).params; }

Vec random_message(const FieldTower& t, std::size_t k, Rng& rng) {
  Vec m(k);
  for (auto& x : m) x = t.sample_subfield(t.levels(), rng);
  return m;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::invalid_argument;  // sentinel: nothing thrown
}

std::size_t weight(std::span<const Elem> v) {
  std::size_t w = 0;
  for (Elem x : v) w += !x.is_zero();
  return w;
}

}  // namespace

TEST_CASE("keygen produces a consistent key pair") {
  Rng rng(11);
  const TrsParams p = params_128();
  KeyPair kp = keygen(p, rng);
  CHECK_NOTHROW(check_key(kp.priv.key));
  CHECK(kp.pub.g_pub.rows() == p.k);
  CHECK(kp.pub.g_pub.cols() == p.n);
  CHECK(linalg::rank(kp.priv.s) == p.k);
  CHECK(public_from_private(kp.priv).g_pub == kp.pub.g_pub);
  // Rows of G_pub span the TRS code.
  CHECK(linalg::rowspace_equal(kp.pub.g_pub, trs_generator(kp.priv.key)));
  CHECK(kp.pub.size_bytes() == 60u * 127u * 2u);
}

TEST_CASE("keygen is deterministic in the seed") {
  const TrsParams p = params_128();
  Rng a(5), b(5), c(6);
  KeyPair ka = keygen(p, a), kb = keygen(p, b), kc = keygen(p, c);
  CHECK(ka.pub.g_pub == kb.pub.g_pub);
  CHECK(write_private(ka.priv) == write_private(kb.priv));
  CHECK_FALSE(ka.pub.g_pub == kc.pub.g_pub);
}

TEST_CASE("encrypt then decrypt recovers the message") {
  Rng rng(21);
  const TrsParams p = params_128();
  KeyPair kp = keygen(p, rng);
  const FieldTower& t = p.tower();
  Decryptor dec(kp.priv);
  for (int trial = 0; trial < 5; ++trial) {
    Vec m = random_message(t, p.k, rng);
    Vec y = encrypt(m, kp.pub, rng);
    Vec e = y;
    Vec c = linalg::multiply(m, kp.pub.g_pub);
    for (std::size_t i = 0; i < p.n; ++i) e[i] += c[i];
    CHECK(weight(e) == error_weight(p.n, p.k));
    CHECK(dec(y) == m);
  }
  // Zero message still gets a full-weight error.
  Vec zero(p.k);
  Vec y0 = encrypt(zero, kp.pub, rng);
  CHECK(weight(y0) == error_weight(p.n, p.k));
  CHECK(decrypt(y0, kp.priv) == zero);
  // No error at all decodes as well.
  Vec m = random_message(t, p.k, rng);
  CHECK(dec(linalg::multiply(m, kp.pub.g_pub)) == m);
}

TEST_CASE("random words fail to decrypt") {
  Rng rng(31);
  const TrsParams p = params_128();
  KeyPair kp = keygen(p, rng);
  Decryptor dec(kp.priv);
  for (int trial = 0; trial < 3; ++trial) {
    Vec y = random_message(p.tower(), p.n, rng);
    CHECK(code_of([&] { dec(y); }) == Errc::decryption_failure);
  }
}

TEST_CASE("encrypt rejects wrong message length") {
  Rng rng(1);
  KeyPair kp = keygen(params_128(), rng);
  Vec m(10);
  CHECK(code_of([&] { encrypt(m, kp.pub, rng); }) == Errc::dimension_mismatch);
}

TEST_CASE("text formats round-trip") {
  Rng rng(41);
  const TrsParams p = params_128();
  KeyPair kp = keygen(p, rng);

  const std::string pub = write_public(kp.pub);
  CHECK(pub.rfind("TRS-MCELIECE v1 public\nq0=128 n=127 k=60 l=1\n", 0) == 0);
  PublicKey pk2 = read_public(pub);
  CHECK(pk2.g_pub == kp.pub.g_pub);
  CHECK(write_public(pk2) == pub);

  const std::string priv = write_private(kp.priv);
  CHECK(priv.rfind("TRS-MCELIECE v1 private\n", 0) == 0);
  PrivateKey sk2 = read_private(priv);
  CHECK(sk2.s == kp.priv.s);
  CHECK(sk2.key.alpha == kp.priv.key.alpha);
  CHECK(sk2.key.eta == kp.priv.key.eta);

  Vec m = random_message(p.tower(), p.k, rng);
  Vec y = encrypt(m, kp.pub, rng);
  const std::string ct = write_ciphertext(p, y);
  Ciphertext c2 = read_ciphertext(ct);
  CHECK(c2.y == y);
  CHECK(decrypt(c2.y, sk2) == m);

  // Two bytes per element at m = 14: four hex digits.
  const std::string line = write_vector_line(p.tower(), m);
  CHECK(line.size() == p.k * 5);
  CHECK(read_vector_line(p.tower(), line, p.k) == m);
}

TEST_CASE("readers are strict") {
  Rng rng(51);
  const TrsParams p = params_128();
  KeyPair kp = keygen(p, rng);
  const std::string pub = write_public(kp.pub);
  auto bad = [](const std::string& text) {
    return code_of([&] { read_public(text); }) == Errc::format_error;
  };
  CHECK(bad(""));
  CHECK(bad(pub.substr(0, pub.size() - 1)));                 // no final newline
  CHECK(bad(pub + "\n"));                                    // trailing empty line
  CHECK(bad("TRS-MCELIECE v2 public" + pub.substr(22)));     // version
  CHECK(bad("TRS-MCELIECE v1 private" + pub.substr(22)));    // wrong kind
  {
    std::string s = pub;
    s.replace(s.find("k=60"), 4, "k=61");  // invalid parameter set
    CHECK(bad(s));
  }
  {
    std::string s = pub;
    s.replace(s.find("q0=128"), 6, "q0=0128");
    CHECK(bad(s));
  }
  {
    std::string s = pub;
    const auto pos = s.find(' ', s.find("l=1\n") + 4);
    s.replace(pos, 1, "  ");  // double space
    CHECK(bad(s));
  }
  {
    std::string s = pub;
    const auto pos = s.find("l=1\n") + 4;
    s[pos] = 'g';  // not hex
    CHECK(bad(s));
  }
  {
    std::string s = pub;
    const auto last = s.rfind('\n', s.size() - 2);
    CHECK(bad(s.substr(0, last + 1)));  // one row missing
  }
  {
    std::string s = pub;
    const auto pos = s.find("l=1\n") + 4;
    s.insert(pos, "0");  // wrong element width
    CHECK(bad(s));
  }
  {
    // Element outside F_{2^14}: top nibble of a four-digit hex must be < 4.
    std::string s = pub;
    const auto pos = s.find("l=1\n") + 4;
    s[pos] = 'f';
    CHECK(bad(s));
  }
  // A private key with eta in the base field is rejected.
  {
    PrivateKey sk = kp.priv;
    sk.key.eta[0] = Elem{1};
    CHECK(code_of([&] { read_private(write_private(sk)); }) == Errc::format_error);
  }
  CHECK(code_of([&] { read_ciphertext(pub); }) == Errc::format_error);
}
