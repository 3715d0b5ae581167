#ifndef PLAB_ERRORS_HPP
#define PLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace plab {

/// Every failure mode the library reports. The C API maps these 1:1 onto
/// status codes, so the enum is part of the public contract.
enum class ErrorCode {
  invalid_argument,
  non_finite_value,
  // graph construction
  asymmetric_input,
  nonpositive_weight,
  self_loop,
  isolated_vertex,
  unknown_vertex,
  empty_interior,
  degenerate_size,
  disconnected_after_retries,
  edge_list_parse,
  // operator evaluation
  missing_neighbor_value,
  support_mismatch,
  missing_boundary_data,
  // spectral
  zero_denominator,
  not_connected,
  empty_boundary,
  no_convergence,
  nonzero_boundary_data,
  // dynamics
  no_contraction,
  max_sweeps_exceeded,
  step_underflow_without_growth,
  nonpositive_denominator,
  quadrature_failure,
  // certificates
  domain_mismatch,
  below_equilibrium,
  hypothesis_violated,
  // CLI / config
  config_parse,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace plab

#endif
