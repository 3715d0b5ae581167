#include "plab/errors.hpp"

namespace plab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::non_finite_value: return "NonFiniteValue";
    case ErrorCode::asymmetric_input: return "AsymmetricInput";
    case ErrorCode::nonpositive_weight: return "NonpositiveWeight";
    case ErrorCode::self_loop: return "SelfLoop";
    case ErrorCode::isolated_vertex: return "IsolatedVertex";
    case ErrorCode::unknown_vertex: return "UnknownVertex";
    case ErrorCode::empty_interior: return "EmptyInterior";
    case ErrorCode::degenerate_size: return "DegenerateSize";
    case ErrorCode::disconnected_after_retries: return "DisconnectedAfterRetries";
    case ErrorCode::edge_list_parse: return "EdgeListParse";
    case ErrorCode::missing_neighbor_value: return "MissingNeighborValue";
    case ErrorCode::support_mismatch: return "SupportMismatch";
    case ErrorCode::missing_boundary_data: return "MissingBoundaryData";
    case ErrorCode::zero_denominator: return "ZeroDenominator";
    case ErrorCode::not_connected: return "NotConnected";
    case ErrorCode::empty_boundary: return "EmptyBoundary";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::nonzero_boundary_data: return "NonzeroBoundaryData";
    case ErrorCode::no_contraction: return "NoContraction";
    case ErrorCode::max_sweeps_exceeded: return "MaxSweepsExceeded";
    case ErrorCode::step_underflow_without_growth: return "StepUnderflowWithoutGrowth";
    case ErrorCode::nonpositive_denominator: return "NonpositiveDenominator";
    case ErrorCode::quadrature_failure: return "QuadratureFailure";
    case ErrorCode::domain_mismatch: return "DomainMismatch";
    case ErrorCode::below_equilibrium: return "BelowEquilibrium";
    case ErrorCode::hypothesis_violated: return "HypothesisViolated";
    case ErrorCode::config_parse: return "ConfigParse";
  }
  return "UnknownError";
}

}  // namespace plab
