#ifndef PLAB_SRC_STEPPER_HPP
#define PLAB_SRC_STEPPER_HPP

#include <functional>
#include <span>
#include <vector>

#include "plab/dynamics.hpp"

namespace plab::detail {

using RhsFn =
    std::function<void(double, std::span<const double>, std::span<double>)>;

enum class StopReason { horizon, threshold, underflow_as_blowup };

struct AdaptiveResult {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  StepStats stats;
  bool detected = false;
  double threshold_time = 0.0;
  StopReason reason = StopReason::horizon;
};

/// Shared adaptive driver: classic 4th-order steps compared against two half
/// steps, componentwise acceptance, fifth-order update by extrapolation.
/// Stops at the horizon or when sup|y| crosses opts.blowup_threshold. A step
/// underflow counts as blow-up only when the state has grown past
/// growth_gate; otherwise step_underflow_without_growth.
AdaptiveResult adaptive_rk(const RhsFn& rhs, std::span<const double> y0,
                           const IntegrateOptions& opts, double growth_gate);

}  // namespace plab::detail

#endif
