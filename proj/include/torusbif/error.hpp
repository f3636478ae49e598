#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace torusbif {

enum class errc {
  table_out_of_range,
  grid_too_coarse,
  regularity_unavailable,
  no_convergence,
  singular_jacobian,
  unsupported_p,
  unsupported_multiplier,
  unsupported_regime,
  zero_lambda,
  stall_at_min_step,
  truncation_overflow,
  lambda_out_of_range,
  blowup_detected,
  config_error,
  invalid_argument,
};

inline std::string_view to_string(errc code) {
  switch (code) {
    case errc::table_out_of_range: return "TableOutOfRange";
    case errc::grid_too_coarse: return "GridTooCoarse";
    case errc::regularity_unavailable: return "RegularityUnavailable";
    case errc::no_convergence: return "NoConvergence";
    case errc::singular_jacobian: return "SingularJacobian";
    case errc::unsupported_p: return "UnsupportedP";
    case errc::unsupported_multiplier: return "UnsupportedMultiplier";
    case errc::unsupported_regime: return "UnsupportedRegime";
    case errc::zero_lambda: return "ZeroLambda";
    case errc::stall_at_min_step: return "StallAtMinStep";
    case errc::truncation_overflow: return "TruncationOverflow";
    case errc::lambda_out_of_range: return "LambdaOutOfRange";
    case errc::blowup_detected: return "BlowupDetected";
    case errc::config_error: return "ConfigError";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace torusbif
