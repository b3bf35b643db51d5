#include "trs/errors.hpp"

namespace trs {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::degree_bound: return "degree-bound";
    case Errc::division_by_zero: return "division-by-zero";
    case Errc::level_out_of_range: return "level-out-of-range";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::no_solution: return "no-solution";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::instance_too_large: return "instance-too-large";
    case Errc::decoding_failure: return "decoding-failure";
    case Errc::decryption_failure: return "decryption-failure";
    case Errc::not_an_rs_code: return "not-an-rs-code";
    case Errc::unexpected_dimension: return "unexpected-dimension";
    case Errc::no_shift_found: return "no-shift-found";
    case Errc::eta_unresolved: return "eta-unresolved";
    case Errc::verification_failed: return "verification-failed";
    case Errc::format_error: return "format-error";
  }
  return "unknown";
}

}  // namespace trs
