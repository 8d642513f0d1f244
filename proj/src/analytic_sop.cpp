#include "fdsec/analytic_sop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fdsec {

SopInputs sop_inputs_from_config(const SystemConfig& cfg, double delta_k) {
  SopInputs in;
  in.var_ab = cfg.var_ab;
  in.var_rb = cfg.var_rb;
  in.var_ae = cfg.var_ae;
  in.var_re = cfg.var_re;
  in.beta_r = cfg.beta_r();
  in.kappa_b = cfg.noise_psd_bob;
  in.kappa_e = cfg.noise_psd_eve;
  in.delta_k = delta_k;
  in.target_rate = cfg.target_rate;
  in.gamma_bar_b = cfg.symbol_psd_data() * (cfg.var_ab + cfg.var_rb * in.beta_r) / cfg.noise_psd_bob;
  return in;
}

double alpha_k(const SopInputs& in) {
  const double eve_noise = in.kappa_e + in.delta_k;
  if (!(eve_noise > 0.0)) throw std::domain_error("alpha_k: kappa_e + delta_k must be positive");
  if (!(in.kappa_b > 0.0)) throw std::domain_error("alpha_k: kappa_b must be positive");
  if (std::isinf(in.delta_k)) return 1.0;

  const double bob = (in.var_ab + in.var_rb * in.beta_r) / in.kappa_b;
  const double eve = std::exp2(in.target_rate) * (in.var_ae + in.var_re * in.beta_r) / eve_noise;
  if (bob + eve == 0.0) throw std::domain_error("alpha_k: both Bob and Eve channels vanish");
  return bob / (bob + eve);
}

SopValue sop_subchannel(const SopInputs& in) {
  if (in.gamma_bar_b < 0.0) throw std::domain_error("sop_subchannel: gamma_B must be >= 0");
  if (in.gamma_bar_b == 0.0) {
    if (in.target_rate > 0.0) return {1.0, true};
    throw std::domain_error("sop_subchannel: gamma_B = 0 with zero target is undefined");
  }
  const double fading = std::exp(-(std::exp2(in.target_rate) - 1.0) / in.gamma_bar_b);
  const double p = 1.0 - alpha_k(in) * fading;
  return {std::clamp(p, 0.0, 1.0), false};
}

double saturation_floor(const SopInputs& in) { return std::clamp(1.0 - alpha_k(in), 0.0, 1.0); }

}  // namespace fdsec
