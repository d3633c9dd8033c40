// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "chaintrick/chain_system.hpp"
#include "chaintrick/hopf.hpp"

namespace chaintrick {

struct StepControl {
  double rtol = 1e-9;
  double atol = 1e-11;
  /// Spacing of the dense-output samples.
  double sample_interval = 0.1;
  /// |y| above this stops the run with status Diverged.
  double divergence_bound = 1e9;
};

enum class IntegrationStatus { Completed, Diverged };

struct Trajectory {
  std::vector<double> times;
  std::vector<ChainState> states;
  MacroParams params;
  InvestmentParams investment;
  IntegrationStatus status = IntegrationStatus::Completed;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  std::size_t size() const { return times.size(); }
  std::vector<double> y_series() const;
};

/// Dormand–Prince 5(4) with its continuous extension for dense output.
/// Throws CapitalNonPositive when an accepted step reaches k <= 0 and
/// StepFailure when the step size underflows.
Trajectory integrate(const ChainSystem& sys, const ChainState& s0, double horizon,
                     const StepControl& control = {});

/// CSV with header `t,y,u1,...,um,k` at 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

enum class CycleKind { LimitCycle, Damped, Diverged };
std::string_view to_string(CycleKind k);

struct CycleMetrics {
  CycleKind kind = CycleKind::Damped;
  /// Mean spacing of the last five maxima of y.
  std::optional<double> period;
  /// Peak-to-trough (max - min) of y over the final period.
  std::optional<double> amplitude;
  /// Half of amplitude.
  std::optional<double> semi_amplitude;
  /// Slope of log(excursion) against time; negative when damped.
  std::optional<double> decay_rate;
  int maxima = 0;
  /// Relative spread of the last five peak-to-trough excursions.
  double excursion_spread = 0.0;
};

/// Discards the first `transient_fraction` of the run, then locates maxima
/// of y by parabolic interpolation. Throws InsufficientOscillations when
/// fewer than six maxima remain.
CycleMetrics cycle_metrics(const Trajectory& traj, double transient_fraction = 0.5);

/// Period from successive upward zero crossings of y - mean(y) after the
/// transient; an independent check on the maxima-based period.
double period_from_crossings(const Trajectory& traj, double transient_fraction = 0.5);

struct HopfCycleCheck {
  double before = 0.0;  // parameter value on the stable side
  double after = 0.0;   // parameter value on the oscillating side
  CycleMetrics metrics_before;
  CycleMetrics metrics_after;
  bool supercritical = false;
};

/// Simulates the chain system `offset` (relative) on either side of a Hopf
/// point, starting from the equilibrium with y perturbed by `perturbation`
/// (relative). The point is labeled supercritical when the unstable side
/// settles on a bounded cycle and the stable side decays.
HopfCycleCheck check_hopf_cycle(HopfPoint& hp, const MacroParams& base,
                                const InvestmentParams& inv, double offset = 0.01,
                                double perturbation = 0.01);

}  // namespace chaintrick
