// Achievable rates at Bob and Eve, the cyclic-prefix null-space AN precoder,
// and the per-realization secrecy rate / outage indicator.
#pragma once

#include "fdsec/channel_model.hpp"
#include "fdsec/numerics.hpp"
#include "fdsec/system_config.hpp"

namespace fdsec {

/// Orthonormal basis of the null space of Bob's CP-removed channel.
struct AnPrecoder {
  ComplexMatrix u;               // (N + n_cp) x n_cp
  double nullity_residual = 0.0; // ||R_cp H_B u||_F / ||R_cp H_B||_F
};

enum class NullSpaceMethod {
  recursion,  // back-substitution through Bob's causal channel, then orthonormalize
  svd,        // full SVD of R_cp H_B via null_space_basis
};

/// AN covariance at Eve's DFT outputs, kept in low-rank form:
/// covariance = factor * factor^H.
struct EveInterferenceProfile {
  ComplexMatrix factor;  // N x n_cp, scaled by sqrt(theta P_A / L_proc)
  RealVector delta;      // per-subcarrier AN power (diagonal of the covariance)

  ComplexMatrix covariance() const;
  Index rank(double tol = 1e-10) const;
};

/// Receiver noise after CP removal: white at `white_psd`, or a full N x N
/// time-domain covariance when forwarded relay noise is coloured.
struct ReceiverNoise {
  double white_psd = 1.0;
  ComplexMatrix covariance;

  bool is_white() const { return covariance.size() == 0; }
  ComplexMatrix time_covariance(int n) const;
};

enum class RateMethod {
  structured,  // per-subcarrier sums and low-rank determinant identities
  dense,       // literal log-determinants of the N x N matrices
};

struct RateReport {
  double rate_bob = 0.0;
  double rate_eve = 0.0;
  double secrecy_rate = 0.0;
  bool outage = true;
  double nullity_residual = 0.0;
};

inline constexpr double kNullityTolerance = 1e-10;

/// Thermal noise kappa_m, plus the relay's forwarded noise when
/// cfg.include_forwarded_relay_noise is set.
ReceiverNoise receiver_noise(const ChannelDraw& draw, const SystemConfig& cfg, Receiver receiver);

AnPrecoder an_precoder(const EquivalentCir& cir_bob, const SystemConfig& cfg,
                       NullSpaceMethod method = NullSpaceMethod::recursion);

EveInterferenceProfile eve_interference(const EquivalentCir& cir_eve, const AnPrecoder& precoder,
                                        const SystemConfig& cfg, const ComplexMatrix& dft);
EveInterferenceProfile eve_interference(const EquivalentCir& cir_eve, const AnPrecoder& precoder,
                                        const SystemConfig& cfg);

double bob_rate(const EquivalentCir& cir_bob, const ReceiverNoise& noise, const SystemConfig& cfg,
                RateMethod method = RateMethod::structured);
double bob_rate(const EquivalentCir& cir_bob, const SystemConfig& cfg,
                RateMethod method = RateMethod::structured);

/// Eve's rate. Without a profile this is the no-AN rate; with one, the AN
/// covariance is added to her noise. cfg.eve_decoder selects joint detection
/// over the whole block or independent single-tap detection per subcarrier.
double eve_rate(const EquivalentCir& cir_eve, const EveInterferenceProfile* profile,
                const ReceiverNoise& noise, const SystemConfig& cfg,
                RateMethod method = RateMethod::structured);
double eve_rate(const EquivalentCir& cir_eve, const EveInterferenceProfile* profile,
                const SystemConfig& cfg, RateMethod method = RateMethod::structured);

struct TrialOptions {
  NullSpaceMethod null_space = NullSpaceMethod::recursion;
  RateMethod rates = RateMethod::structured;
};

/// Evaluates one channel realization. Holds the DFT matrix for the
/// configured block size so repeated trials do not rebuild it.
class TrialEvaluator {
 public:
  explicit TrialEvaluator(SystemConfig cfg, TrialOptions options = {});

  RateReport operator()(const ChannelDraw& draw) const;
  const SystemConfig& config() const { return cfg_; }

 private:
  SystemConfig cfg_;
  TrialOptions options_;
  ComplexMatrix dft_;
};

RateReport evaluate_trial(const ChannelDraw& draw, const SystemConfig& cfg, TrialOptions options = {});

}  // namespace fdsec
