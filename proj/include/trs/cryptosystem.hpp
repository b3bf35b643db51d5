#pragma once

// McEliece-type public-key encryption with twisted Reed-Solomon codes.
// Public key G_pub = S G_TRS, ciphertext y = m G_pub + e with w(e) = (n-k)/2.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "trs/linalg.hpp"
#include "trs/rng.hpp"
#include "trs/trs_codes.hpp"

namespace trs {

struct PublicKey {
  TrsParams params;
  Matrix g_pub;  // k x n, top level

  /// k * n * ceil(m / 8) bytes in the binary element encoding.
  std::size_t size_bytes() const;
};

struct PrivateKey {
  Matrix s;  // k x k, invertible
  TrsKey key;
};

struct KeyPair {
  PublicKey pub;
  PrivateKey priv;
};

/// Samples alpha, then eta, then S (in that order) from rng.
KeyPair keygen(const TrsParams& params, Rng& rng);

/// Public key generated by a private key.
PublicKey public_from_private(const PrivateKey& sk);

inline std::size_t error_weight(std::size_t n, std::size_t k) { return (n - k) / 2; }

/// y = m G_pub + e, e of weight exactly (n-k)/2 with uniform support and
/// uniform nonzero values.
Vec encrypt(std::span<const Elem> m, const PublicKey& pk, Rng& rng);

/// Holds S^-1 and the code decoder so repeated decryptions share setup.
class Decryptor {
 public:
  explicit Decryptor(const PrivateKey& sk);
  /// Throws Error(decryption_failure) when no codeword is within the radius.
  Vec operator()(std::span<const Elem> y) const;

 private:
  Matrix s_inv_;
  TrsDecoder decoder_;
};

Vec decrypt(std::span<const Elem> y, const PrivateKey& sk);

// Text formats. Every reader is strict and throws Error(format_error).

std::string write_public(const PublicKey& pk);
PublicKey read_public(std::string_view text);

std::string write_private(const PrivateKey& sk);
PrivateKey read_private(std::string_view text);

struct Ciphertext {
  TrsParams params;
  Vec y;
};
std::string write_ciphertext(const TrsParams& params, std::span<const Elem> y);
Ciphertext read_ciphertext(std::string_view text);

/// One line of `count` space-separated elements.
std::string write_vector_line(const FieldTower& t, std::span<const Elem> v);
Vec read_vector_line(const FieldTower& t, std::string_view text, std::size_t count);

}  // namespace trs
