#include "fdsec/secrecy_rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fdsec {

namespace {

// ||R_cp H||_F^2 without forming the matrix: tap d contributes to every
// CP-removed row t with t >= d.
double cp_removed_energy(const EquivalentCir& cir, const SystemConfig& cfg) {
  const int m = cfg.block_length();
  double e = 0.0;
  for (const auto& t : cir.taps) e += std::norm(t.coefficient) * (m - std::max(cfg.n_cp, t.delay));
  return e;
}

bool taps_align_with_cp(const EquivalentCir& cir, int n_cp) {
  for (const auto& t : cir.taps)
    if (t.coefficient != Complex{} && t.delay % n_cp != 0) return false;
  return true;
}

ComplexMatrix recursion_null_space(const EquivalentCir& cir, const SystemConfig& cfg) {
  const int m = cfg.block_length();
  const int n_cp = cfg.n_cp;
  const Complex h0 = cir.tap(0);

  // x[0..n_cp) is free; every later sample is forced so that the
  // CP-removed output h0 x[t] + sum_{d>0} h_d x[t-d] vanishes.
  ComplexMatrix x = ComplexMatrix::Zero(m, n_cp);
  x.topRows(n_cp).setIdentity();
  for (int t = n_cp; t < m; ++t) {
    for (const auto& tap : cir.taps) {
      if (tap.delay == 0 || tap.coefficient == Complex{}) continue;
      x.row(t) -= (tap.coefficient / h0) * x.row(t - tap.delay);
    }
  }

  if (taps_align_with_cp(cir, n_cp)) {
    // Column i is supported on {i + j n_cp}; the columns are already orthogonal.
    for (Index c = 0; c < x.cols(); ++c) x.col(c).normalize();
    return x;
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(x);
  return qr.householderQ() * ComplexMatrix::Identity(m, n_cp);
}

ComplexMatrix svd_null_space(const EquivalentCir& cir, const SystemConfig& cfg) {
  const ComplexMatrix a = conv_matrix(cir, cfg.block_length()).bottomRows(cfg.n_subchannels);
  auto ns = null_space_basis(a, kNullityTolerance);
  // A rank-deficient Bob channel has a larger null space; the AN budget is
  // still split over n_cp streams.
  return ns.basis.leftCols(std::min<Index>(ns.dimension(), cfg.n_cp));
}

// Subcarrier noise PSDs: diag(F K F^H).
RealVector subcarrier_noise(const ReceiverNoise& noise, int n) {
  if (noise.is_white()) return RealVector::Constant(n, noise.white_psd);
  const ComplexMatrix f = dft_matrix(n);
  return (f * noise.covariance * f.adjoint()).diagonal().real();
}

double dense_rate(const ComplexMatrix& circulant, const ComplexMatrix& noise_cov, double p, int block) {
  const ComplexMatrix signal = p * circulant * circulant.adjoint();
  return (log2det_hpd(noise_cov + signal) - log2det_hpd(noise_cov)) / block;
}

}  // namespace

ComplexMatrix EveInterferenceProfile::covariance() const { return factor * factor.adjoint(); }

Index EveInterferenceProfile::rank(double tol) const {
  if (factor.cols() == 0 || factor.norm() == 0.0) return 0;
  return numerical_rank(factor, tol);
}

ComplexMatrix ReceiverNoise::time_covariance(int n) const {
  if (is_white()) return white_psd * ComplexMatrix::Identity(n, n);
  return covariance;
}

ReceiverNoise receiver_noise(const ChannelDraw& draw, const SystemConfig& cfg, Receiver receiver) {
  ReceiverNoise noise;
  noise.white_psd = receiver == Receiver::bob ? cfg.noise_psd_bob : cfg.noise_psd_eve;
  if (!cfg.include_forwarded_relay_noise || cfg.noise_psd_relay == 0.0) return noise;

  const EquivalentCir fwd = relay_noise_cir(draw, cfg, receiver);
  if (cfg.full_sic) {
    // One relay tap at L <= n_cp: each CP-removed sample sees a distinct
    // relay noise sample, so the forwarded part stays white.
    noise.white_psd += cfg.noise_psd_relay * std::norm(fwd.tap(cfg.l_proc));
    return noise;
  }
  const int n = cfg.n_subchannels;
  const ComplexMatrix a = conv_matrix(fwd, cfg.block_length()).bottomRows(n);
  noise.covariance = noise.white_psd * ComplexMatrix::Identity(n, n) + cfg.noise_psd_relay * a * a.adjoint();
  return noise;
}

AnPrecoder an_precoder(const EquivalentCir& cir_bob, const SystemConfig& cfg, NullSpaceMethod method) {
  if (cfg.n_cp < cir_bob.max_delay())
    throw std::invalid_argument("an_precoder: n_cp shorter than Bob's channel delay spread");

  const double energy = cir_bob.energy();
  const double a_energy = cp_removed_energy(cir_bob, cfg);
  const auto residual = [&](const ComplexMatrix& u) {
    return a_energy > 0.0 ? convolve_columns(cir_bob, u, cfg.n_cp).norm() / std::sqrt(a_energy) : 0.0;
  };

  AnPrecoder p;
  if (method == NullSpaceMethod::recursion && std::norm(cir_bob.tap(0)) > 1e-24 * energy) {
    p.u = recursion_null_space(cir_bob, cfg);
    p.nullity_residual = residual(p.u);
    // The recursion grows like |h_L / h_0|^(M / L) and can overflow.
    if (p.u.allFinite() && p.nullity_residual <= kNullityTolerance) return p;
  }
  p.u = svd_null_space(cir_bob, cfg);
  p.nullity_residual = residual(p.u);
  return p;
}

EveInterferenceProfile eve_interference(const EquivalentCir& cir_eve, const AnPrecoder& precoder,
                                        const SystemConfig& cfg, const ComplexMatrix& dft) {
  const int n = cfg.n_subchannels;
  EveInterferenceProfile prof;
  if (!cfg.an_active() || precoder.u.cols() == 0) {
    prof.factor = ComplexMatrix::Zero(n, 0);
    prof.delta = RealVector::Zero(n);
    return prof;
  }
  const double stream_psd = cfg.an_psd() / cfg.l_proc;
  const ComplexMatrix v = convolve_columns(cir_eve, precoder.u, cfg.n_cp);
  prof.factor.noalias() = std::sqrt(stream_psd) * (dft * v);
  prof.delta = prof.factor.rowwise().squaredNorm();
  return prof;
}

EveInterferenceProfile eve_interference(const EquivalentCir& cir_eve, const AnPrecoder& precoder,
                                        const SystemConfig& cfg) {
  return eve_interference(cir_eve, precoder, cfg, dft_matrix(cfg.n_subchannels));
}

double bob_rate(const EquivalentCir& cir_bob, const ReceiverNoise& noise, const SystemConfig& cfg,
                RateMethod method) {
  const int n = cfg.n_subchannels;
  const int block = cfg.block_length();
  const double p = cfg.symbol_psd_data();
  if (method == RateMethod::dense || !noise.is_white())
    return dense_rate(effective_circulant(cir_bob, cfg), noise.time_covariance(n), p, block);

  const ComplexVector gains = subchannel_gains(periodic_alias(cir_bob, n), n);
  const double kappa = noise.white_psd;
  double acc = 0.0;
  for (Index k = 0; k < n; ++k) acc += std::log2(1.0 + p * std::norm(gains(k)) / kappa);
  return acc / block;
}

double bob_rate(const EquivalentCir& cir_bob, const SystemConfig& cfg, RateMethod method) {
  return bob_rate(cir_bob, ReceiverNoise{cfg.noise_psd_bob, {}}, cfg, method);
}

double eve_rate(const EquivalentCir& cir_eve, const EveInterferenceProfile* profile, const ReceiverNoise& noise,
                const SystemConfig& cfg, RateMethod method) {
  const int n = cfg.n_subchannels;
  const int block = cfg.block_length();
  const double p = cfg.symbol_psd_data();
  const bool has_an = profile != nullptr && profile->factor.cols() > 0;

  if (cfg.eve_decoder == EveDecoder::per_subcarrier) {
    const ComplexVector gains = subchannel_gains(periodic_alias(cir_eve, n), n);
    const RealVector kappa = subcarrier_noise(noise, n);
    double acc = 0.0;
    for (Index k = 0; k < n; ++k) {
      const double interference = kappa(k) + (has_an ? profile->delta(k) : 0.0);
      acc += std::log2(1.0 + p * std::norm(gains(k)) / interference);
    }
    return acc / block;
  }

  if (!has_an) return bob_rate(cir_eve, noise, cfg, method);

  if (method == RateMethod::dense || !noise.is_white()) {
    // Work at the DFT outputs: F (K + Sigma_time) F^H = F K F^H + factor factor^H.
    const ComplexMatrix f = dft_matrix(n);
    const ComplexMatrix h = effective_circulant(cir_eve, cfg);
    const ComplexMatrix h_freq = f * h * f.adjoint();
    const ComplexMatrix k_freq = f * noise.time_covariance(n) * f.adjoint();
    const ComplexMatrix w = k_freq + profile->covariance();
    return dense_rate(h_freq, w, p, block);
  }

  // White noise kappa and covariance kappa I + Phi Phi^H at the DFT outputs.
  // With D = diag(kappa + p |H_k|^2), two applications of the matrix
  // determinant lemma reduce both N x N determinants to r x r ones.
  const double kappa = noise.white_psd;
  const ComplexVector gains = subchannel_gains(periodic_alias(cir_eve, n), n);
  const ComplexMatrix& phi = profile->factor;
  const Index r = phi.cols();

  RealVector d(n);
  double acc = 0.0;
  for (Index k = 0; k < n; ++k) {
    d(k) = kappa + p * std::norm(gains(k));
    acc += std::log2(d(k) / kappa);
  }
  const ComplexMatrix scaled = d.cwiseInverse().cwiseSqrt().asDiagonal() * phi;
  ComplexMatrix with_signal = ComplexMatrix::Identity(r, r);
  with_signal.selfadjointView<Eigen::Lower>().rankUpdate(scaled.adjoint());
  ComplexMatrix noise_only = ComplexMatrix::Identity(r, r);
  noise_only.selfadjointView<Eigen::Lower>().rankUpdate(phi.adjoint(), 1.0 / kappa);
  // Cholesky reads only the lower triangle filled by rankUpdate.
  acc += log2det_hpd(with_signal) - log2det_hpd(noise_only);
  return acc / block;
}

double eve_rate(const EquivalentCir& cir_eve, const EveInterferenceProfile* profile, const SystemConfig& cfg,
                RateMethod method) {
  return eve_rate(cir_eve, profile, ReceiverNoise{cfg.noise_psd_eve, {}}, cfg, method);
}

TrialEvaluator::TrialEvaluator(SystemConfig cfg, TrialOptions options)
    : cfg_(std::move(cfg)), options_(options) {
  cfg_.validate();
  dft_ = dft_matrix(cfg_.n_subchannels);
}

RateReport TrialEvaluator::operator()(const ChannelDraw& draw) const {
  const EquivalentCir cir_b = equivalent_cir(draw, cfg_, Receiver::bob);
  const EquivalentCir cir_e = equivalent_cir(draw, cfg_, Receiver::eve);
  const ReceiverNoise noise_b = receiver_noise(draw, cfg_, Receiver::bob);
  const ReceiverNoise noise_e = receiver_noise(draw, cfg_, Receiver::eve);

  RateReport rep;
  rep.rate_bob = bob_rate(cir_b, noise_b, cfg_, options_.rates);
  if (cfg_.an_active()) {
    const AnPrecoder pre = an_precoder(cir_b, cfg_, options_.null_space);
    rep.nullity_residual = pre.nullity_residual;
    // Bob's rate above carries no AN term; that is only valid if the AN is
    // actually invisible to him.
    if (!(pre.nullity_residual <= kNullityTolerance))
      throw std::runtime_error("AN precoder leaks into Bob's CP-removed signal");
    const EveInterferenceProfile prof = eve_interference(cir_e, pre, cfg_, dft_);
    rep.rate_eve = eve_rate(cir_e, &prof, noise_e, cfg_, options_.rates);
  } else {
    rep.rate_eve = eve_rate(cir_e, nullptr, noise_e, cfg_, options_.rates);
  }
  rep.secrecy_rate = std::max(rep.rate_bob - rep.rate_eve, 0.0);
  rep.outage = rep.secrecy_rate < cfg_.target_rate;
  return rep;
}

RateReport evaluate_trial(const ChannelDraw& draw, const SystemConfig& cfg, TrialOptions options) {
  return TrialEvaluator(cfg, options)(draw);
}

}  // namespace fdsec
