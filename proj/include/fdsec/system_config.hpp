#pragma once

#include <string>
#include <string_view>

namespace fdsec {

enum class EveDecoder { joint, per_subcarrier };

std::string_view to_string(EveDecoder decoder);
EveDecoder eve_decoder_from_string(std::string_view name);

/// Scenario parameters for the full-duplex amplify-and-forward wiretap link.
///
/// Transmit PSDs are per coherence slot (one OFDM symbol of N + n_cp samples);
/// the per-sample PSD seen by the rate expressions is psd / (N + n_cp).
struct SystemConfig {
  int n_subchannels = 64;
  int n_cp = 16;
  int l_proc = 16;

  double psd_alice = 1000.0 * 80.0;
  double psd_relay = 1000.0 * 80.0;
  double theta = 0.5;  // fraction of Alice's power spent on artificial noise

  double noise_psd_relay = 1.0;
  double noise_psd_bob = 1.0;
  double noise_psd_eve = 1.0;

  double var_ab = 1.0;
  double var_ae = 1.0;
  double var_ar = 1.0;
  double var_rb = 1.0;
  double var_re = 1.0;
  double var_rr = 1e-3;

  double target_rate = 4.0;  // bits/sec/Hz

  bool full_sic = true;
  bool include_forwarded_relay_noise = false;
  EveDecoder eve_decoder = EveDecoder::joint;

  int block_length() const { return n_subchannels + n_cp; }
  double symbol_psd_alice() const { return psd_alice / block_length(); }
  double symbol_psd_relay() const { return psd_relay / block_length(); }
  double symbol_psd_data() const { return (1.0 - theta) * symbol_psd_alice(); }
  double an_psd() const { return theta * psd_alice; }
  /// Relay-to-Alice PSD ratio; zero when Alice is silent.
  double beta_r() const { return psd_alice > 0.0 ? psd_relay / psd_alice : 0.0; }
  double effective_var_rr() const { return full_sic ? 0.0 : var_rr; }
  bool an_active() const { return theta > 0.0; }

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

/// Defaults: N = 64, N_cp = L_proc = 16, theta = 1/2, target 4 bits/sec/Hz,
/// 30 dB per-sample SNR on every link, unit channel variances, full SIC.
SystemConfig default_config();

/// Sets every transmit PSD so that psd / (N + n_cp) / noise equals `snr_db`
/// relative to unit noise PSD.
void set_symbol_snr_db(SystemConfig& cfg, double snr_db);

/// Returns cfg with l_proc = value and n_cp = value (2 * value with residual
/// self-interference, whose channel spans 2 l_proc), rescaling the per-slot
/// PSDs so the per-sample PSDs (and hence SNRs) are unchanged.
SystemConfig with_delay_and_cp(const SystemConfig& cfg, int value);

}  // namespace fdsec
