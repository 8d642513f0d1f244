// Closed-form per-subchannel secrecy outage probability. Each subchannel gain
// is treated as a single Rayleigh variable whose variance is the sum of the
// direct and relayed tap variances.
#pragma once

#include "fdsec/system_config.hpp"

namespace fdsec {

struct SopInputs {
  double gamma_bar_b = 0.0;  // average data SNR at Bob
  double var_ab = 1.0;
  double var_rb = 1.0;
  double var_ae = 1.0;
  double var_re = 1.0;
  double beta_r = 1.0;
  double kappa_b = 1.0;
  double kappa_e = 1.0;
  double delta_k = 0.0;      // AN power on this subcarrier at Eve
  double target_rate = 4.0;
};

/// gamma_B = p_data (var_ab + var_rb beta_R) / kappa_B with the per-sample
/// data PSD of `cfg`.
SopInputs sop_inputs_from_config(const SystemConfig& cfg, double delta_k = 0.0);

/// Multiplicative penalty factor due to the eavesdropper, in (0, 1].
double alpha_k(const SopInputs& in);

struct SopValue {
  double probability = 1.0;
  bool certain_outage = false;  // gamma_B == 0 with a positive target
};

/// 1 - alpha_k exp(-(2^R - 1) / gamma_B), clamped to [0, 1].
SopValue sop_subchannel(const SopInputs& in);

/// High-SNR limit of sop_subchannel: 1 - alpha_k.
double saturation_floor(const SopInputs& in);

}  // namespace fdsec
