#pragma once

// Twisted Reed-Solomon codes with hooks h, twists t and coefficients eta.
// Codewords are evaluations of f(X) + sum_j eta_j f_{h_j} X^(k-1+t_j).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trs/field_tower.hpp"
#include "trs/linalg.hpp"
#include "trs/rs_codes.hpp"

namespace trs {

struct TrsParams {
  std::uint64_t q0 = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  unsigned l = 0;
  std::size_t r = 0;           // 0 for relaxed parameter sets
  std::vector<std::size_t> t;  // twists
  std::vector<std::size_t> h;  // hooks
  std::vector<std::size_t> I;  // {0..k-1} without the hooks, ascending
  bool strict = true;

  unsigned m0() const;
  /// Tower with F_{q0} at the bottom and l quadratic steps.
  const FieldTower& tower() const;
};

struct ParamCheck {
  std::optional<TrsParams> params;
  std::vector<std::string> violations;
  bool ok() const { return params.has_value(); }
};

/// Checks the conditions that make (q0, n, k, l) a valid parameter set and
/// derives r, t, h and I. Violations are returned, not thrown.
ParamCheck validate_params(std::uint64_t q0, std::size_t n, std::size_t k,
                           unsigned l);

/// Arbitrary hooks and twists for small test instances. Only the range
/// conditions are enforced (hooks distinct increasing in [0, k), twists
/// distinct in [1, n-k], k <= n <= q0). Throws Error(invalid_argument).
TrsParams relaxed_params(std::uint64_t q0, std::size_t n, std::size_t k,
                         std::vector<std::size_t> t, std::vector<std::size_t> h);

struct TrsKey {
  TrsParams params;
  Vec alpha;
  Vec eta;

  const FieldTower& tower() const { return params.tower(); }
};

/// Throws Error(invalid_argument) unless the locators are distinct base
/// field elements and every eta_i lies in F_{q_i} \ F_{q_(i-1)} (strict) or
/// is nonzero (relaxed).
void check_key(const TrsKey& key);

/// f has k coefficients.
Polynomial twisted_encode(const TrsKey& key, std::span<const Elem> f);

/// k x n generator; row i evaluates the twisted encoding of the i-th unit.
Matrix trs_generator(const TrsKey& key);

/// Key (a alpha, eta_j a^-(k-1+t_j-h_j)) generating the same code.
TrsKey scale_key(const TrsKey& key, Elem a);

/// Guess-and-decode for TRS codes. For each guess g of the hooked message
/// coefficients the shifted word y - ev(sum g_j eta_j X^(k-1+t_j)) is
/// decoded in RS_k; the guess is accepted when the decoded message has
/// f_{h_j} = g_j. Guesses run in lexicographic order of encodings.
class TrsDecoder {
 public:
  /// Largest supported guess space, in bits (m * l).
  static constexpr unsigned kMaxGuessBits = 32;

  explicit TrsDecoder(const TrsKey& key);

  /// Length-k message, or nullopt when no guess is consistent.
  std::optional<Vec> operator()(std::span<const Elem> y) const;
  /// Same search with a full Gao decode per guess; slow, for cross-checks.
  std::optional<Vec> decode_reference(std::span<const Elem> y) const;

  /// Number of guesses tried by the last successful or failed call.
  std::uint64_t last_guesses() const { return last_guesses_; }

 private:
  std::optional<Vec> accept(std::span<const Elem> y, std::span<const Elem> g,
                            const std::vector<std::size_t>& errors) const;
  Vec shifted(std::span<const Elem> y, std::span<const Elem> g) const;
  Elem guess_value(std::uint64_t code) const;

  TrsKey key_;
  const FieldTower* t_;
  rs::SyndromeDecoder syn_;
  std::vector<Vec> twist_words_;  // ev(eta_j X^(k-1+t_j))
  std::vector<Vec> twist_syndromes_;
  mutable std::uint64_t last_guesses_ = 0;
};

/// Minimum distance by enumerating all q^k codewords (requires q^k <= 2^20).
std::size_t exhaustive_min_distance(const TrsKey& key);

}  // namespace trs
