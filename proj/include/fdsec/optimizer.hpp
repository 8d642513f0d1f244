// Exhaustive sweeps over the relay processing delay and the target secrecy
// rate. Every grid point reuses the same trial streams (common random
// numbers), so differences between points are not masked by draw noise.
#pragma once

#include "fdsec/monte_carlo.hpp"

#include <string>
#include <vector>

namespace fdsec {

struct SweepPoint {
  double parameter = 0.0;
  Estimate throughput;
  Estimate sop;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double argmax = 0.0;  // smallest parameter attaining the largest mean throughput
  Estimate max_throughput;
};

std::vector<int> default_lproc_grid();
std::vector<double> default_rate_grid();

/// Sets l_proc = v and n_cp per with_delay_and_cp for each grid value
/// (per-sample PSDs held fixed).
SweepResult sweep_lproc(const SystemConfig& cfg, const std::vector<int>& values, std::int64_t n_trials,
                        std::uint64_t seed, const McOptions& options = {});

/// Secrecy rates do not depend on the target, so one batch of trials is
/// thresholded at every rate in `rates`.
SweepResult sweep_target_rate(const SystemConfig& cfg, const std::vector<double>& rates, std::int64_t n_trials,
                              std::uint64_t seed, const McOptions& options = {});

struct LabeledSweep {
  std::string label;
  SweepResult result;
};

/// Proposed scheme and the three baselines over the same delay grid:
///   proposed          AN on, n_cp = l_proc = v
///   lproc_1           AN on, l_proc = n_cp = 1 at every grid point
///   no_relay          relay silent, no AN, n_cp = v
///   relay_without_an  theta = 0, n_cp = l_proc = v
std::vector<LabeledSweep> benchmark_suite(const SystemConfig& cfg, const std::vector<int>& values,
                                          std::int64_t n_trials, std::uint64_t seed,
                                          const McOptions& options = {});

/// Recomputes argmax / max_throughput from the points.
void finalize_argmax(SweepResult& result);

/// True when the mean throughput rises to the argmax and falls after it,
/// allowing a step in the wrong direction only if the two 95% CIs overlap.
bool unimodal_within_ci(const SweepResult& result);
/// The rising half of unimodal_within_ci.
bool nondecreasing_to_argmax_within_ci(const SweepResult& result);

}  // namespace fdsec
