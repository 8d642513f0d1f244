// Monte Carlo estimation of secrecy outage and secure throughput over channel
// realizations, plus a sample-by-sample time-domain model of the relay link
// used to validate the block matrix model.
#pragma once

#include "fdsec/channel_model.hpp"
#include "fdsec/rng.hpp"
#include "fdsec/secrecy_rates.hpp"

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <vector>

namespace fdsec {

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;  // standard error of the mean
  std::int64_t n_trials = 0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
};

/// Bernoulli proportion with binomial standard error; CI clamped to [0, 1].
Estimate proportion_estimate(std::int64_t successes, std::int64_t n_trials);

struct McOptions {
  int workers = 0;  // 0 = hardware concurrency
  TrialOptions trial{};
};

int resolve_workers(int requested);

/// Runs fn(i) for i in [0, n) on `workers` threads with contiguous static
/// chunks. The first exception thrown by any worker is rethrown.
template <typename Fn>
void parallel_for(std::int64_t n, int workers, Fn&& fn) {
  workers = static_cast<int>(std::min<std::int64_t>(resolve_workers(workers), std::max<std::int64_t>(n, 1)));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = n * w / workers;
    const std::int64_t end = n * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::int64_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Fixed-order pairwise summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);

/// Six independent CN(0, var) gains, drawn in the order ab, ae, ar, rb, re, rr
/// (all six are always consumed so streams align across scenarios).
ChannelDraw draw_channels(RngSpec rng, const SystemConfig& cfg);

/// Per-trial rate reports for trials 0..n-1 of stream family `seed`.
std::vector<RateReport> run_trials(const SystemConfig& cfg, std::int64_t n_trials, std::uint64_t seed,
                                   const McOptions& options = {});

/// Outage fraction among precomputed secrecy rates for a target rate.
Estimate sop_from_secrecy(std::span<const double> secrecy_rates, double target_rate);
/// target_rate * (1 - SOP), standard error scaled by the target rate.
Estimate throughput_from_sop(const Estimate& sop, double target_rate);

Estimate estimate_sop(const SystemConfig& cfg, std::int64_t n_trials, std::uint64_t seed,
                      const McOptions& options = {});
Estimate estimate_throughput(const SystemConfig& cfg, std::int64_t n_trials, std::uint64_t seed,
                             const McOptions& options = {});

/// Outage of the single-subcarrier wiretap channel on subcarrier k, with a
/// fixed AN power delta at Eve: log2(1 + p|H_B^k|^2/kB) - log2(1 + p|H_E^k|^2/(kE + delta)) < R.
Estimate estimate_subchannel_sop(const SystemConfig& cfg, int k, double delta, std::int64_t n_trials,
                                 std::uint64_t seed, const McOptions& options = {});

/// Per-subcarrier AN power at Eve, averaged over trials 0..n-1 (zero
/// without AN). Feeds the analytic outage in place of a fixed delta.
RealVector mean_an_power(const SystemConfig& cfg, std::int64_t n_trials, std::uint64_t seed,
                         const McOptions& options = {});

struct OracleOutput {
  ComplexVector relay;  // relay receive samples y_R(t)
  ComplexVector bob;
  ComplexVector eve;
};

struct OracleNoise {
  RngSpec rng;
};

/// Literal sample recursion of the relay loop over one block of N + n_cp
/// samples. The relay re-injects G y_R(t - L) through h_rr at every order
/// (no truncation). Noise is omitted unless `noise` is given.
OracleOutput time_domain_oracle(const ChannelDraw& draw, const SystemConfig& cfg, const ComplexVector& input,
                                const ComplexVector* an_input = nullptr,
                                const std::optional<OracleNoise>& noise = std::nullopt);

struct SubchannelStatistics {
  RealVector variance;       // per-subcarrier sample variance of H^k
  ComplexMatrix covariance;  // sample covariance across subcarriers
  std::int64_t n_trials = 0;
};

SubchannelStatistics subchannel_statistics(const SystemConfig& cfg, Receiver receiver, std::int64_t n_trials,
                                           std::uint64_t seed);
RealVector empirical_subchannel_variance(const SystemConfig& cfg, Receiver receiver, std::int64_t n_trials,
                                         std::uint64_t seed);

}  // namespace fdsec
