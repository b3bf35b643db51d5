#pragma once

#include <stdexcept>
#include <string>

namespace trs {

enum class Errc {
  degree_bound,
  division_by_zero,
  level_out_of_range,
  dimension_mismatch,
  no_solution,
  invalid_argument,
  instance_too_large,
  decoding_failure,
  decryption_failure,
  not_an_rs_code,
  unexpected_dimension,
  no_shift_found,
  eta_unresolved,
  verification_failed,
  format_error,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace trs
