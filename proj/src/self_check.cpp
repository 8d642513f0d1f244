#include "fdsec/self_check.hpp"

#include "fdsec/monte_carlo.hpp"
#include "fdsec/secrecy_rates.hpp"

#include <algorithm>
#include <cmath>

namespace fdsec {

namespace {

struct Tracker {
  CheckResult result;
  void update(double v) { result.worst = std::max(result.worst, v); }
};

ComplexVector random_block(StreamRng& gen, Index n) {
  ComplexVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = gen.complex_gaussian(1.0);
  return v;
}

}  // namespace

std::vector<CheckResult> run_self_check(const SystemConfig& cfg_in, int cases, std::uint64_t seed) {
  cfg_in.validate();
  SystemConfig cfg = cfg_in;
  // The recursion/matrix equivalence and the AN machinery are defined for the
  // two-tap channel; residual self-interference is checked separately.
  cfg.full_sic = true;
  if (cfg.theta == 0.0) cfg.theta = 0.5;
  cfg = with_delay_and_cp(cfg, cfg.l_proc);

  const int n = cfg.n_subchannels;
  const ComplexMatrix f = dft_matrix(n);
  const CpOperators ops = cp_operators(n, cfg.n_cp);

  Tracker cp{{"cp_identity", 0.0, 0.0, false}};
  Tracker null_rec{{"nullity_recursion", 0.0, kNullityTolerance, false}};
  Tracker null_svd{{"nullity_svd", 0.0, kNullityTolerance, false}};
  Tracker offdiag{{"diagonalization_offdiag", 0.0, 1e-10, false}};
  Tracker diag{{"diagonalization_eigenvalues", 0.0, 1e-10, false}};
  Tracker oracle{{"oracle_equivalence", 0.0, 1e-10, false}};
  Tracker invisible{{"an_invisible_at_bob", 0.0, 1e-10, false}};
  Tracker rates{{"rate_routes", 0.0, 1e-9, false}};

  cp.update((ops.r_cp * ops.t_cp - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());

  for (int c = 0; c < cases; ++c) {
    const ChannelDraw draw = draw_channels({seed, static_cast<std::uint64_t>(c)}, cfg);
    const EquivalentCir cir_b = equivalent_cir(draw, cfg, Receiver::bob);
    const EquivalentCir cir_e = equivalent_cir(draw, cfg, Receiver::eve);

    const AnPrecoder pre = an_precoder(cir_b, cfg, NullSpaceMethod::recursion);
    null_rec.update(pre.nullity_residual);
    null_svd.update(an_precoder(cir_b, cfg, NullSpaceMethod::svd).nullity_residual);

    const ComplexMatrix circ = effective_circulant(cir_b, cfg);
    const ComplexMatrix lambda = f * circ * f.adjoint();
    offdiag.update(offdiag_ratio(lambda));
    const ComplexVector gains = subchannel_gains(periodic_alias(cir_b, n), n);
    diag.update((lambda.diagonal() - gains).cwiseAbs().maxCoeff() / std::max(1.0, gains.cwiseAbs().maxCoeff()));

    StreamRng gen({seed ^ 0x5eedULL, static_cast<std::uint64_t>(c)});
    const ComplexVector data = random_block(gen, n);
    const ComplexVector tx = ops.t_cp.cast<Complex>() * data;
    const OracleOutput plain = time_domain_oracle(draw, cfg, tx);
    const ComplexVector expected = circ * data;
    const ComplexVector got = plain.bob.tail(n);
    oracle.update((got - expected).norm() / std::max(expected.norm(), 1e-300));

    const ComplexVector an = pre.u * random_block(gen, pre.u.cols());
    const OracleOutput jammed = time_domain_oracle(draw, cfg, tx, &an);
    invisible.update((jammed.bob.tail(n) - got).norm() / std::max(got.norm(), 1e-300));

    const EveInterferenceProfile prof = eve_interference(cir_e, pre, cfg, f);
    const double eve_fast = eve_rate(cir_e, &prof, cfg, RateMethod::structured);
    const double eve_dense = eve_rate(cir_e, &prof, cfg, RateMethod::dense);
    const double bob_fast = bob_rate(cir_b, cfg, RateMethod::structured);
    const double bob_dense = bob_rate(cir_b, cfg, RateMethod::dense);
    rates.update(std::max(std::abs(eve_fast - eve_dense), std::abs(bob_fast - bob_dense)));
  }

  std::vector<CheckResult> out;
  for (Tracker* t : {&cp, &null_rec, &null_svd, &offdiag, &diag, &oracle, &invisible, &rates}) {
    t->result.passed = t->result.worst <= t->result.tolerance;
    out.push_back(t->result);
  }
  return out;
}

}  // namespace fdsec
