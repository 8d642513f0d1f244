#include "fdsec/channel_model.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fdsec {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw std::invalid_argument("invalid config: " + what); }

void require_nonnegative(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) invalid(std::string(name) + " must be finite and >= 0");
}

}  // namespace

std::string_view to_string(EveDecoder decoder) {
  return decoder == EveDecoder::joint ? "joint" : "per_subcarrier";
}

EveDecoder eve_decoder_from_string(std::string_view name) {
  if (name == "joint") return EveDecoder::joint;
  if (name == "per_subcarrier") return EveDecoder::per_subcarrier;
  throw std::invalid_argument("unknown eve_decoder '" + std::string(name) + "'");
}

void SystemConfig::validate() const {
  if (n_subchannels < 1) invalid("n_subchannels must be >= 1");
  if (l_proc < 1) invalid("l_proc must be >= 1");
  if (n_cp < l_proc) invalid("n_cp must be >= l_proc");
  if (n_cp > n_subchannels) invalid("n_cp must be <= n_subchannels");
  require_nonnegative(psd_alice, "psd_alice");
  require_nonnegative(psd_relay, "psd_relay");
  require_nonnegative(noise_psd_relay, "noise_psd_relay");
  require_nonnegative(var_ab, "var_ab");
  require_nonnegative(var_ae, "var_ae");
  require_nonnegative(var_ar, "var_ar");
  require_nonnegative(var_rb, "var_rb");
  require_nonnegative(var_re, "var_re");
  require_nonnegative(var_rr, "var_rr");
  require_nonnegative(target_rate, "target_rate");
  if (!std::isfinite(noise_psd_bob) || noise_psd_bob <= 0.0) invalid("noise_psd_bob must be > 0");
  if (!std::isfinite(noise_psd_eve) || noise_psd_eve <= 0.0) invalid("noise_psd_eve must be > 0");
  if (!std::isfinite(theta) || theta < 0.0 || theta > 1.0) invalid("theta must lie in [0, 1]");
  if (theta > 0.0 && n_cp != l_proc) {
    std::ostringstream os;
    os << "artificial noise (theta > 0) requires n_cp == l_proc, got n_cp=" << n_cp << " l_proc=" << l_proc;
    invalid(os.str());
  }
  if (!full_sic && n_cp < 2 * l_proc) {
    std::ostringstream os;
    os << "residual self-interference spreads the channel to 2*l_proc=" << 2 * l_proc
       << " taps; n_cp=" << n_cp << " cannot absorb it";
    invalid(os.str());
  }
}

SystemConfig default_config() {
  SystemConfig cfg;
  set_symbol_snr_db(cfg, 30.0);
  return cfg;
}

void set_symbol_snr_db(SystemConfig& cfg, double snr_db) {
  const double linear = std::pow(10.0, snr_db / 10.0);
  cfg.psd_alice = linear * cfg.block_length();
  cfg.psd_relay = linear * cfg.block_length();
}

SystemConfig with_delay_and_cp(const SystemConfig& cfg, int value) {
  SystemConfig out = cfg;
  const double per_sample_alice = cfg.symbol_psd_alice();
  const double per_sample_relay = cfg.symbol_psd_relay();
  out.l_proc = value;
  out.n_cp = cfg.full_sic ? value : 2 * value;
  out.psd_alice = per_sample_alice * out.block_length();
  out.psd_relay = per_sample_relay * out.block_length();
  return out;
}

Complex EquivalentCir::tap(int delay) const {
  for (const auto& t : taps)
    if (t.delay == delay) return t.coefficient;
  return {};
}

double EquivalentCir::energy() const {
  double e = 0.0;
  for (const auto& t : taps) e += std::norm(t.coefficient);
  return e;
}

double relay_gain(const ChannelDraw& draw, const SystemConfig& cfg) {
  const double p_relay = cfg.symbol_psd_relay();
  if (p_relay == 0.0) return 0.0;
  const double denom = std::norm(draw.h_ar) * cfg.symbol_psd_alice() +
                       (cfg.full_sic ? 0.0 : std::norm(draw.h_rr) * p_relay) + cfg.noise_psd_relay;
  if (!(denom > 0.0)) throw std::domain_error("relay_gain: relay receives neither signal nor noise");
  return std::sqrt(p_relay / denom);
}

EquivalentCir equivalent_cir(const ChannelDraw& draw, const SystemConfig& cfg, Receiver receiver) {
  const Complex direct = receiver == Receiver::bob ? draw.h_ab : draw.h_ae;
  const Complex relay_link = receiver == Receiver::bob ? draw.h_rb : draw.h_re;
  const double g = relay_gain(draw, cfg);

  EquivalentCir cir;
  cir.taps.push_back({0, direct});
  cir.taps.push_back({cfg.l_proc, relay_link * g * draw.h_ar});
  if (!cfg.full_sic) cir.taps.push_back({2 * cfg.l_proc, relay_link * g * g * draw.h_rr * draw.h_ar});
  return cir;
}

EquivalentCir relay_noise_cir(const ChannelDraw& draw, const SystemConfig& cfg, Receiver receiver) {
  const Complex relay_link = receiver == Receiver::bob ? draw.h_rb : draw.h_re;
  const double g = relay_gain(draw, cfg);
  EquivalentCir cir;
  cir.taps.push_back({0, Complex{}});
  cir.taps.push_back({cfg.l_proc, relay_link * g});
  if (!cfg.full_sic) cir.taps.push_back({2 * cfg.l_proc, relay_link * g * g * draw.h_rr});
  return cir;
}

ComplexMatrix conv_matrix(const EquivalentCir& cir, Index length) {
  if (length < cir.max_delay() + 1)
    throw std::invalid_argument("conv_matrix: length shorter than the channel memory");
  ComplexMatrix h = ComplexMatrix::Zero(length, length);
  for (const auto& t : cir.taps)
    for (Index col = 0; col + t.delay < length; ++col) h(col + t.delay, col) += t.coefficient;
  return h;
}

CpOperators cp_operators(int n, int n_cp) {
  if (n < 1 || n_cp < 0 || n_cp > n) throw std::invalid_argument("cp_operators: need 0 <= n_cp <= n, n >= 1");
  CpOperators ops;
  ops.t_cp = Eigen::MatrixXd::Zero(n + n_cp, n);
  ops.t_cp.topRows(n_cp) = Eigen::MatrixXd::Identity(n, n).bottomRows(n_cp);
  ops.t_cp.bottomRows(n) = Eigen::MatrixXd::Identity(n, n);
  ops.r_cp = Eigen::MatrixXd::Zero(n, n + n_cp);
  ops.r_cp.rightCols(n) = Eigen::MatrixXd::Identity(n, n);
  return ops;
}

ComplexMatrix effective_circulant(const EquivalentCir& cir, const SystemConfig& cfg) {
  if (cfg.n_cp < cir.max_delay())
    throw std::invalid_argument("effective_circulant: n_cp shorter than the channel delay spread");
  const int n = cfg.n_subchannels;
  const auto ops = cp_operators(n, cfg.n_cp);
  const ComplexMatrix h = conv_matrix(cir, cfg.block_length());
  return ops.r_cp.cast<Complex>() * h * ops.t_cp.cast<Complex>();
}

EquivalentCir periodic_alias(const EquivalentCir& cir, int n) {
  if (n < 1) throw std::invalid_argument("periodic_alias: n must be positive");
  std::map<int, Complex> folded;
  for (const auto& t : cir.taps) folded[t.delay % n] += t.coefficient;
  EquivalentCir out;
  for (const auto& [d, c] : folded) out.taps.push_back({d, c});
  return out;
}

ComplexVector subchannel_gains(const EquivalentCir& cir, int n) {
  if (n < cir.max_delay() + 1) throw std::invalid_argument("subchannel_gains: n shorter than the channel memory");
  ComplexVector out = ComplexVector::Zero(n);
  for (const auto& t : cir.taps) {
    for (int k = 0; k < n; ++k) {
      const long kl = (static_cast<long>(t.delay) * k) % n;
      out(k) += t.coefficient * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(kl) / n);
    }
  }
  return out;
}

ComplexMatrix convolve_columns(const EquivalentCir& cir, const Eigen::Ref<const ComplexMatrix>& x, Index skip) {
  const Index m = x.rows();
  if (skip < 0 || skip > m) throw std::invalid_argument("convolve_columns: skip out of range");
  ComplexMatrix y = ComplexMatrix::Zero(m - skip, x.cols());
  for (const auto& t : cir.taps) {
    if (t.coefficient == Complex{}) continue;
    // Output row r (absolute r + skip) reads input row r + skip - delay.
    const Index first = std::max<Index>(0, t.delay - skip);
    const Index count = m - skip - first;
    if (count <= 0) continue;
    y.middleRows(first, count).noalias() += t.coefficient * x.middleRows(first + skip - t.delay, count);
  }
  return y;
}

}  // namespace fdsec
