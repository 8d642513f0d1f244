#include "fdsec/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fdsec {

namespace {

constexpr double kZ95 = 1.959963984540054;

}  // namespace

Estimate proportion_estimate(std::int64_t successes, std::int64_t n_trials) {
  if (n_trials < 1) throw std::invalid_argument("proportion_estimate: need at least one trial");
  Estimate e;
  e.n_trials = n_trials;
  e.mean = static_cast<double>(successes) / static_cast<double>(n_trials);
  e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(n_trials));
  e.ci95_low = std::clamp(e.mean - kZ95 * e.std_error, 0.0, 1.0);
  e.ci95_high = std::clamp(e.mean + kZ95 * e.std_error, 0.0, 1.0);
  return e;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

ChannelDraw draw_channels(RngSpec rng, const SystemConfig& cfg) {
  StreamRng gen(rng);
  ChannelDraw d;
  d.h_ab = gen.complex_gaussian(cfg.var_ab);
  d.h_ae = gen.complex_gaussian(cfg.var_ae);
  d.h_ar = gen.complex_gaussian(cfg.var_ar);
  d.h_rb = gen.complex_gaussian(cfg.var_rb);
  d.h_re = gen.complex_gaussian(cfg.var_re);
  d.h_rr = gen.complex_gaussian(cfg.var_rr);
  if (cfg.full_sic) d.h_rr = Complex{};
  return d;
}

std::vector<RateReport> run_trials(const SystemConfig& cfg, std::int64_t n_trials, std::uint64_t seed,
                                   const McOptions& options) {
  if (n_trials < 1) throw std::invalid_argument("run_trials: n_trials must be >= 1");
  const TrialEvaluator evaluate(cfg, options.trial);
  std::vector<RateReport> out(static_cast<std::size_t>(n_trials));
  parallel_for(n_trials, options.workers, [&](std::int64_t t) {
    const ChannelDraw draw = draw_channels({seed, static_cast<std::uint64_t>(t)}, cfg);
    out[static_cast<std::size_t>(t)] = evaluate(draw);
  });
  return out;
}

Estimate sop_from_secrecy(std::span<const double> secrecy_rates, double target_rate) {
  const auto outages =
      std::count_if(secrecy_rates.begin(), secrecy_rates.end(), [&](double s) { return s < target_rate; });
  return proportion_estimate(outages, static_cast<std::int64_t>(secrecy_rates.size()));
}

Estimate throughput_from_sop(const Estimate& sop, double target_rate) {
  Estimate e;
  e.n_trials = sop.n_trials;
  e.mean = target_rate * (1.0 - sop.mean);
  e.std_error = target_rate * sop.std_error;
  e.ci95_low = target_rate * (1.0 - sop.ci95_high);
  e.ci95_high = target_rate * (1.0 - sop.ci95_low);
  return e;
}

Estimate estimate_sop(const SystemConfig& cfg, std::int64_t n_trials, std::uint64_t seed,
                      const McOptions& options) {
  const auto reports = run_trials(cfg, n_trials, seed, options);
  std::vector<double> secrecy(reports.size());
  std::transform(reports.begin(), reports.end(), secrecy.begin(), [](const RateReport& r) { return r.secrecy_rate; });
  return sop_from_secrecy(secrecy, cfg.target_rate);
}

Estimate estimate_throughput(const SystemConfig& cfg, std::int64_t n_trials, std::uint64_t seed,
                             const McOptions& options) {
  return throughput_from_sop(estimate_sop(cfg, n_trials, seed, options), cfg.target_rate);
}

Estimate estimate_subchannel_sop(const SystemConfig& cfg, int k, double delta, std::int64_t n_trials,
                                 std::uint64_t seed, const McOptions& options) {
  cfg.validate();
  if (k < 0 || k >= cfg.n_subchannels) throw std::invalid_argument("estimate_subchannel_sop: k out of range");
  if (n_trials < 1) throw std::invalid_argument("estimate_subchannel_sop: n_trials must be >= 1");
  const double p = cfg.symbol_psd_data();
  std::vector<char> outage(static_cast<std::size_t>(n_trials));
  parallel_for(n_trials, options.workers, [&](std::int64_t t) {
    const ChannelDraw draw = draw_channels({seed, static_cast<std::uint64_t>(t)}, cfg);
    const int n = cfg.n_subchannels;
    const Complex hb = subchannel_gains(periodic_alias(equivalent_cir(draw, cfg, Receiver::bob), n), n)(k);
    const Complex he = subchannel_gains(periodic_alias(equivalent_cir(draw, cfg, Receiver::eve), n), n)(k);
    const double secrecy = std::max(0.0, std::log2(1.0 + p * std::norm(hb) / cfg.noise_psd_bob) -
                                             std::log2(1.0 + p * std::norm(he) / (cfg.noise_psd_eve + delta)));
    outage[static_cast<std::size_t>(t)] = secrecy < cfg.target_rate;
  });
  return proportion_estimate(std::count(outage.begin(), outage.end(), 1), n_trials);
}

RealVector mean_an_power(const SystemConfig& cfg, std::int64_t n_trials, std::uint64_t seed,
                         const McOptions& options) {
  cfg.validate();
  if (n_trials < 1) throw std::invalid_argument("mean_an_power: n_trials must be >= 1");
  const int n = cfg.n_subchannels;
  if (!cfg.an_active()) return RealVector::Zero(n);
  const ComplexMatrix dft = dft_matrix(n);
  Eigen::MatrixXd delta(n, n_trials);
  parallel_for(n_trials, options.workers, [&](std::int64_t t) {
    const ChannelDraw draw = draw_channels({seed, static_cast<std::uint64_t>(t)}, cfg);
    const AnPrecoder pre = an_precoder(equivalent_cir(draw, cfg, Receiver::bob), cfg, options.trial.null_space);
    delta.col(t) = eve_interference(equivalent_cir(draw, cfg, Receiver::eve), pre, cfg, dft).delta;
  });
  RealVector mean(n);
  std::vector<double> row(static_cast<std::size_t>(n_trials));
  for (Index k = 0; k < n; ++k) {
    for (std::int64_t t = 0; t < n_trials; ++t) row[static_cast<std::size_t>(t)] = delta(k, t);
    mean(k) = pairwise_sum(row) / static_cast<double>(n_trials);
  }
  return mean;
}

OracleOutput time_domain_oracle(const ChannelDraw& draw, const SystemConfig& cfg, const ComplexVector& input,
                                const ComplexVector* an_input, const std::optional<OracleNoise>& noise) {
  const Index m = cfg.block_length();
  if (input.size() > m) throw std::invalid_argument("time_domain_oracle: input longer than N + n_cp");
  if (an_input && an_input->size() > m) throw std::invalid_argument("time_domain_oracle: AN input longer than N + n_cp");

  ComplexVector s = ComplexVector::Zero(m);
  s.head(input.size()) = input;
  if (an_input) s.head(an_input->size()) += *an_input;

  const double g = relay_gain(draw, cfg);
  const Complex h_rr = cfg.full_sic ? Complex{} : draw.h_rr;
  const int l = cfg.l_proc;
  std::optional<StreamRng> gen;
  if (noise) gen.emplace(noise->rng);

  OracleOutput out;
  out.relay = ComplexVector::Zero(m);
  out.bob = ComplexVector::Zero(m);
  out.eve = ComplexVector::Zero(m);
  for (Index t = 0; t < m; ++t) {
    const Complex relay_tx = t >= l ? g * out.relay(t - l) : Complex{};
    out.relay(t) = draw.h_ar * s(t) + h_rr * relay_tx;
    out.bob(t) = draw.h_ab * s(t) + draw.h_rb * relay_tx;
    out.eve(t) = draw.h_ae * s(t) + draw.h_re * relay_tx;
    if (gen) {
      out.relay(t) += gen->complex_gaussian(cfg.noise_psd_relay);
      out.bob(t) += gen->complex_gaussian(cfg.noise_psd_bob);
      out.eve(t) += gen->complex_gaussian(cfg.noise_psd_eve);
    }
  }
  return out;
}

SubchannelStatistics subchannel_statistics(const SystemConfig& cfg, Receiver receiver, std::int64_t n_trials,
                                           std::uint64_t seed) {
  if (n_trials < 2) throw std::invalid_argument("subchannel_statistics: need at least two trials");
  const int n = cfg.n_subchannels;
  ComplexVector sum = ComplexVector::Zero(n);
  ComplexMatrix outer = ComplexMatrix::Zero(n, n);
  for (std::int64_t t = 0; t < n_trials; ++t) {
    const ChannelDraw draw = draw_channels({seed, static_cast<std::uint64_t>(t)}, cfg);
    const ComplexVector h = subchannel_gains(periodic_alias(equivalent_cir(draw, cfg, receiver), n), n);
    sum += h;
    outer.selfadjointView<Eigen::Lower>().rankUpdate(h);
  }
  const double count = static_cast<double>(n_trials);
  const ComplexVector mean = sum / count;
  ComplexMatrix second = outer.selfadjointView<Eigen::Lower>();
  SubchannelStatistics stats;
  stats.n_trials = n_trials;
  stats.covariance = (second - count * mean * mean.adjoint()) / (count - 1.0);
  stats.variance = stats.covariance.diagonal().real();
  return stats;
}

RealVector empirical_subchannel_variance(const SystemConfig& cfg, Receiver receiver, std::int64_t n_trials,
                                         std::uint64_t seed) {
  return subchannel_statistics(cfg, receiver, n_trials, seed).variance;
}

}  // namespace fdsec
