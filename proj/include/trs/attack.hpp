#pragma once

// Key recovery for the TRS McEliece scheme from the public key alone.
//
//   1. subfield subcode of G_pub, its Schur square, Sidelnikov-Shestakov
//      on the square: locators up to an affine map a*alpha + b
//   2. exhaustive search for b
//   3. eta from the coefficients of interpolated public rows
//   4. S from a linear solve

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trs/cryptosystem.hpp"
#include "trs/linalg.hpp"
#include "trs/trs_codes.hpp"

namespace trs::attack {

/// Locators over F_{q0} with alpha'[0] = 0 and alpha'[1] = 1 such that
/// rowspace(g) = rowspace(rs::generator(alpha', K)). g must be a level-0
/// generator of some RS_{K,n}, 3 <= K <= n - 2. Throws Error(not_an_rs_code).
Vec sidelnikov_shestakov(const Matrix& g, std::size_t K);

struct AffineStage {
  Vec alpha_prime;
  Matrix g_sub;  // subfield subcode, k - l rows
  Matrix g_sq;   // its Schur square, 2k - 1 rows
  std::int64_t us_subfield = 0;
  std::int64_t us_square = 0;
  std::int64_t us_ss = 0;
};

/// Step 1. Throws Error(unexpected_dimension) when the subcode or its square
/// does not have the expected dimension.
AffineStage recover_locators_affine(const PublicKey& pk);

struct ShiftResult {
  Vec alpha_hat;
  Elem b;
  /// Every b accepted by the test, ascending; b is the first.
  std::vector<Elem> accepted;
};

/// Step 2. For b in ascending encoding order tests whether G', the rows
/// ev(X^i, alpha' - b) for i in I, satisfies G' H^T = 0 with H a parity-check
/// matrix of `target`. The attack passes G_sub; G_pub gives the weaker
/// containment in the public code. Throws Error(no_shift_found).
ShiftResult find_shift(std::span<const Elem> alpha_prime, const Matrix& target,
                       const TrsParams& params);

/// Step 3. eta_hat_j = p_(k-1+t_j) / p_(h_j) read off the first public row
/// (in order) where p_(h_j) != 0. Throws Error(eta_unresolved).
Vec recover_eta(const PublicKey& pk, std::span<const Elem> alpha_hat);

/// Step 4. S with S * trs_generator(alpha_hat, eta_hat) = G_pub.
/// Throws Error(no_solution) when the row spaces differ.
Matrix recover_S(const PublicKey& pk, std::span<const Elem> alpha_hat,
                 std::span<const Elem> eta_hat);

struct StageTimings {
  std::int64_t subfield_subcode = 0;
  std::int64_t square = 0;
  std::int64_t sidelnikov_shestakov = 0;
  std::int64_t shift_search = 0;
  std::int64_t eta = 0;
  std::int64_t solve_s = 0;
  std::int64_t total = 0;
};

struct RecoveredKey {
  PrivateKey key;  // (S_hat, alpha_hat, eta_hat)
  Vec alpha_prime;
  Elem b;
  std::vector<Elem> accepted_shifts;
  std::size_t dim_sub = 0;
  std::size_t rank_sq = 0;
  StageTimings us;  // microseconds
};

/// Full attack. Errors carry the failing stage in their message. The result
/// always satisfies S_hat * trs_generator(key) == G_pub.
RecoveredKey recover_key(const PublicKey& pk);

}  // namespace trs::attack
