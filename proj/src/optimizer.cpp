#include "fdsec/optimizer.hpp"

#include <algorithm>
#include <stdexcept>

namespace fdsec {

namespace {

std::vector<double> secrecy_of(const std::vector<RateReport>& reports) {
  std::vector<double> s(reports.size());
  std::transform(reports.begin(), reports.end(), s.begin(), [](const RateReport& r) { return r.secrecy_rate; });
  return s;
}

SweepPoint point_at(double parameter, const std::vector<double>& secrecy, double target) {
  SweepPoint p;
  p.parameter = parameter;
  p.sop = sop_from_secrecy(secrecy, target);
  p.throughput = throughput_from_sop(p.sop, target);
  return p;
}

bool overlaps(const Estimate& a, const Estimate& b) {
  return a.ci95_low <= b.ci95_high && b.ci95_low <= a.ci95_high;
}

std::size_t argmax_index(const SweepResult& r) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < r.points.size(); ++i) {
    const auto& p = r.points[i];
    const auto& b = r.points[best];
    if (p.throughput.mean > b.throughput.mean ||
        (p.throughput.mean == b.throughput.mean && p.parameter < b.parameter))
      best = i;
  }
  return best;
}

void check_grid(const SystemConfig& cfg, const std::vector<int>& values) {
  if (values.empty()) throw std::invalid_argument("sweep_lproc: empty grid");
  for (int v : values) {
    if (v < 1 || v > cfg.n_subchannels)
      throw std::invalid_argument("sweep_lproc: grid value " + std::to_string(v) + " outside [1, N]");
    with_delay_and_cp(cfg, v).validate();
  }
}

}  // namespace

std::vector<int> default_lproc_grid() { return {1, 2, 4, 8, 12, 16, 24, 32, 48, 64}; }

std::vector<double> default_rate_grid() {
  std::vector<double> r;
  for (int i = 1; i <= 20; ++i) r.push_back(0.5 * i);
  return r;
}

void finalize_argmax(SweepResult& result) {
  if (result.points.empty()) return;
  const auto& best = result.points[argmax_index(result)];
  result.argmax = best.parameter;
  result.max_throughput = best.throughput;
}

SweepResult sweep_lproc(const SystemConfig& cfg, const std::vector<int>& values, std::int64_t n_trials,
                        std::uint64_t seed, const McOptions& options) {
  check_grid(cfg, values);
  SweepResult result;
  for (int v : values) {
    const SystemConfig point_cfg = with_delay_and_cp(cfg, v);
    result.points.push_back(point_at(v, secrecy_of(run_trials(point_cfg, n_trials, seed, options)), cfg.target_rate));
  }
  finalize_argmax(result);
  return result;
}

SweepResult sweep_target_rate(const SystemConfig& cfg, const std::vector<double>& rates, std::int64_t n_trials,
                              std::uint64_t seed, const McOptions& options) {
  if (rates.empty()) throw std::invalid_argument("sweep_target_rate: empty grid");
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (!(rates[i] > 0.0)) throw std::invalid_argument("sweep_target_rate: rates must be positive");
    if (i > 0 && rates[i] < rates[i - 1]) throw std::invalid_argument("sweep_target_rate: rates must be sorted");
  }
  const std::vector<double> secrecy = secrecy_of(run_trials(cfg, n_trials, seed, options));
  SweepResult result;
  for (double r : rates) result.points.push_back(point_at(r, secrecy, r));
  finalize_argmax(result);
  return result;
}

std::vector<LabeledSweep> benchmark_suite(const SystemConfig& cfg, const std::vector<int>& values,
                                          std::int64_t n_trials, std::uint64_t seed, const McOptions& options) {
  check_grid(cfg, values);
  std::vector<LabeledSweep> out;
  out.push_back({"proposed", sweep_lproc(cfg, values, n_trials, seed, options)});

  // The delay is pinned, so every grid point is the same experiment.
  {
    const SweepResult single = sweep_lproc(cfg, {1}, n_trials, seed, options);
    SweepResult fixed;
    for (int v : values) {
      SweepPoint p = single.points.front();
      p.parameter = v;
      fixed.points.push_back(p);
    }
    finalize_argmax(fixed);
    out.push_back({"lproc_1", fixed});
  }

  SystemConfig no_relay = cfg;
  no_relay.psd_relay = 0.0;
  no_relay.theta = 0.0;
  out.push_back({"no_relay", sweep_lproc(no_relay, values, n_trials, seed, options)});

  SystemConfig no_an = cfg;
  no_an.theta = 0.0;
  out.push_back({"relay_without_an", sweep_lproc(no_an, values, n_trials, seed, options)});
  return out;
}

bool nondecreasing_to_argmax_within_ci(const SweepResult& result) {
  if (result.points.empty()) return true;
  const std::size_t peak = argmax_index(result);
  for (std::size_t i = 1; i <= peak; ++i) {
    const auto& prev = result.points[i - 1].throughput;
    const auto& cur = result.points[i].throughput;
    if (cur.mean < prev.mean && !overlaps(prev, cur)) return false;
  }
  return true;
}

bool unimodal_within_ci(const SweepResult& result) {
  if (!nondecreasing_to_argmax_within_ci(result)) return false;
  const std::size_t peak = argmax_index(result);
  for (std::size_t i = peak + 1; i < result.points.size(); ++i) {
    const auto& prev = result.points[i - 1].throughput;
    const auto& cur = result.points[i].throughput;
    if (cur.mean > prev.mean && !overlaps(prev, cur)) return false;
  }
  return true;
}

}  // namespace fdsec
