// Equivalent ISI channel seen by Bob and Eve when Alice transmits and the
// full-duplex relay forwards a delayed, amplified copy of what it hears.
#pragma once

#include "fdsec/numerics.hpp"
#include "fdsec/system_config.hpp"

#include <complex>
#include <vector>

namespace fdsec {

using Complex = std::complex<double>;

/// One joint realization of the six flat-fading link gains.
struct ChannelDraw {
  Complex h_ab{};
  Complex h_ae{};
  Complex h_ar{};
  Complex h_rb{};
  Complex h_re{};
  Complex h_rr{};
};

enum class Receiver { bob, eve };

struct Tap {
  int delay = 0;
  Complex coefficient{};
};

/// Sparse impulse response, delays strictly increasing and starting at 0.
struct EquivalentCir {
  std::vector<Tap> taps;

  int max_delay() const { return taps.empty() ? 0 : taps.back().delay; }
  std::size_t n_taps() const { return taps.size(); }
  Complex tap(int delay) const;
  double energy() const;
};

/// CP insertion (N + n_cp) x N and removal N x (N + n_cp) matrices.
struct CpOperators {
  Eigen::MatrixXd t_cp;
  Eigen::MatrixXd r_cp;
};

/// Amplification factor normalizing the relay's output PSD.
double relay_gain(const ChannelDraw& draw, const SystemConfig& cfg);

/// Two taps {0, L} under full SIC, three taps {0, L, 2L} with residual
/// self-interference (first-order truncation of the relay loop).
EquivalentCir equivalent_cir(const ChannelDraw& draw, const SystemConfig& cfg, Receiver receiver);

/// Impulse response carrying the relay's own receiver noise to `receiver`:
/// taps at L (and 2L with residual self-interference).
EquivalentCir relay_noise_cir(const ChannelDraw& draw, const SystemConfig& cfg, Receiver receiver);

/// length x length lower-triangular Toeplitz (causal linear convolution).
ComplexMatrix conv_matrix(const EquivalentCir& cir, Index length);

CpOperators cp_operators(int n, int n_cp);

/// R_cp * H * T_cp, an N x N circulant matrix.
ComplexMatrix effective_circulant(const EquivalentCir& cir, const SystemConfig& cfg);

/// Taps folded modulo n (delays >= n wrap onto the circulant's period).
EquivalentCir periodic_alias(const EquivalentCir& cir, int n);

/// H^k = sum_l h_l exp(-j 2 pi l k / n) for k = 0..n-1.
ComplexVector subchannel_gains(const EquivalentCir& cir, int n);

/// Rows [skip, rows(x)) of conv_matrix(cir, rows(x)) * x, without forming the
/// matrix. Used for the CP-removed response to many input columns at once.
ComplexMatrix convolve_columns(const EquivalentCir& cir, const Eigen::Ref<const ComplexMatrix>& x,
                               Index skip = 0);

}  // namespace fdsec
