#include <doctest.h>

#include "fdsec/channel_model.hpp"
#include "fdsec/monte_carlo.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>

using namespace fdsec;

namespace {

// Per-sample PSDs p_a, p_r on a block of length M.
SystemConfig with_symbol_psd(SystemConfig cfg, double p_a, double p_r) {
  cfg.psd_alice = p_a * cfg.block_length();
  cfg.psd_relay = p_r * cfg.block_length();
  return cfg;
}

}  // namespace

TEST_CASE("relay_gain examples") {
  ChannelDraw d;
  d.h_ar = 1.0;
  SystemConfig cfg = with_symbol_psd(default_config(), 1.0, 1.0);
  cfg.noise_psd_relay = 0.0;
  CHECK(relay_gain(d, cfg) == doctest::Approx(1.0).epsilon(1e-15));
  cfg.noise_psd_relay = 1.0;
  CHECK(relay_gain(d, cfg) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

  SystemConfig nsic = default_config();
  nsic.full_sic = false;
  nsic.theta = 0.0;
  nsic.n_cp = 32;
  nsic = with_symbol_psd(nsic, 2.0, 1.0);
  nsic.noise_psd_relay = 0.1;
  d.h_ar = std::sqrt(0.5);
  d.h_rr = {0.0, std::sqrt(0.1)};
  CHECK(relay_gain(d, nsic) == doctest::Approx(std::sqrt(1.0 / 1.2)).epsilon(1e-14));

  SystemConfig silent = cfg;
  silent.psd_relay = 0.0;
  CHECK(relay_gain(d, silent) == 0.0);

  ChannelDraw dead;
  cfg.noise_psd_relay = 0.0;
  CHECK_THROWS_AS(relay_gain(dead, cfg), std::domain_error);
}

TEST_CASE("equivalent_cir examples") {
  SystemConfig cfg = with_symbol_psd(test::small_config(64, 4), 1.0, 1.0);
  cfg.noise_psd_relay = 0.0;
  ChannelDraw d;
  d.h_ab = d.h_rb = d.h_ar = 1.0;
  const auto cir = equivalent_cir(d, cfg, Receiver::bob);
  REQUIRE(cir.n_taps() == 2);
  CHECK(cir.taps[0].delay == 0);
  CHECK(cir.taps[1].delay == 4);
  CHECK(std::abs(cir.taps[0].coefficient - Complex(1.0)) < 1e-15);
  CHECK(std::abs(cir.taps[1].coefficient - Complex(1.0)) < 1e-15);

  d.h_rb = 0.0;
  const auto direct_only = equivalent_cir(d, cfg, Receiver::bob);
  REQUIRE(direct_only.n_taps() == 2);
  CHECK(direct_only.taps[1].coefficient == Complex{});
}

TEST_CASE("equivalent_cir delay-spread contract and third tap against the oracle") {
  SystemConfig cfg = default_config();
  cfg.full_sic = false;
  cfg.theta = 0.0;
  cfg.n_cp = 2 * cfg.l_proc;
  cfg.var_rr = 0.5;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const ChannelDraw d = draw_channels({3, t}, cfg);
    const auto cir = equivalent_cir(d, cfg, Receiver::bob);
    REQUIRE(cir.n_taps() == 3);
    CHECK(cir.max_delay() == 2 * cfg.l_proc);
    const double g = relay_gain(d, cfg);
    CHECK(std::abs(cir.tap(2 * cfg.l_proc) - g * g * d.h_rb * d.h_rr * d.h_ar) < 1e-12 * std::abs(cir.tap(0)) + 1e-300);

    ComplexVector impulse = ComplexVector::Zero(1);
    impulse(0) = 1.0;
    const auto out = time_domain_oracle(d, cfg, impulse);
    for (int delay : {0, cfg.l_proc, 2 * cfg.l_proc})
      CHECK(std::abs(out.bob(delay) - cir.tap(delay)) <= 1e-12 * std::max(1.0, std::abs(cir.tap(delay))));
  }

  SystemConfig sic = default_config();
  const auto two = equivalent_cir(draw_channels({3, 0}, sic), sic, Receiver::eve);
  CHECK(two.n_taps() == 2);
  CHECK(two.max_delay() == sic.l_proc);
}

TEST_CASE("conv_matrix examples") {
  EquivalentCir unit;
  unit.taps = {{0, 1.0}};
  CHECK(conv_matrix(unit, 3).isApprox(ComplexMatrix::Identity(3, 3)));

  const Complex a{1.5, -0.5}, b{0.25, 2.0};
  const auto cir = test::two_tap(a, 2, b);
  const ComplexMatrix h = conv_matrix(cir, 4);
  CHECK(h(0, 0) == a);
  CHECK(h(1, 0) == Complex{});
  CHECK(h(2, 0) == b);
  CHECK(h(3, 0) == Complex{});
  for (Index i = 1; i < 4; ++i)
    for (Index j = 1; j < 4; ++j) CHECK(h(i, j) == h(i - 1, j - 1));
  CHECK(h.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().isZero());

  CHECK_THROWS_AS(conv_matrix(cir, 2), std::invalid_argument);
}

TEST_CASE("conv_matrix matches a brute-force convolution") {
  const auto cir = test::two_tap({0.3, 0.4}, 5, {-1.1, 0.2});
  const ComplexVector x = test::random_matrix(20, 1, 4);
  ComplexVector y = ComplexVector::Zero(20);
  for (Index t = 0; t < 20; ++t)
    for (const auto& tap : cir.taps)
      if (t >= tap.delay) y(t) += tap.coefficient * x(t - tap.delay);
  CHECK((conv_matrix(cir, 20) * x - y).norm() < 1e-14);
  CHECK((convolve_columns(cir, x, 6) - y.tail(14)).norm() < 1e-14);
}

TEST_CASE("cp operators") {
  const auto ops = cp_operators(8, 3);
  CHECK(ops.t_cp.rows() == 11);
  CHECK(ops.t_cp.cols() == 8);
  CHECK(ops.r_cp.rows() == 8);
  CHECK(ops.r_cp.cols() == 11);
  CHECK((ops.r_cp * ops.t_cp - Eigen::MatrixXd::Identity(8, 8)).isZero(0.0));
  // The prefix repeats the last n_cp samples.
  for (Index i = 0; i < 3; ++i) CHECK(ops.t_cp(i, 5 + i) == 1.0);
}

TEST_CASE("effective_circulant examples") {
  SystemConfig cfg = test::small_config(4, 2);
  const auto cir = test::two_tap(1.0, 2, 1.0);
  const ComplexMatrix h = effective_circulant(cir, cfg);
  CHECK(std::abs(h(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(h(1, 0)) < 1e-15);
  CHECK(std::abs(h(2, 0) - 1.0) < 1e-15);
  CHECK(std::abs(h(3, 0)) < 1e-15);
  for (Index j = 1; j < 4; ++j)
    for (Index i = 0; i < 4; ++i) CHECK(h(i, j) == h((i + 3) % 4, j - 1));

  EquivalentCir unit;
  unit.taps = {{0, 1.0}};
  CHECK(effective_circulant(unit, test::small_config(16, 4)).isApprox(ComplexMatrix::Identity(16, 16)));

  SystemConfig short_cp = test::small_config(16, 2);
  CHECK_THROWS_AS(effective_circulant(test::two_tap(1.0, 3, 1.0), short_cp), std::invalid_argument);
}

TEST_CASE("subchannel_gains examples") {
  const Complex h0{0.7, -0.1}, h4{-0.2, 0.5};
  const auto cir = test::two_tap(h0, 4, h4);
  const ComplexVector g = subchannel_gains(cir, 8);
  CHECK(std::abs(g(0) - (h0 + h4)) < 1e-15);
  CHECK(std::abs(g(1) - (h0 - h4)) < 1e-15);
  CHECK_THROWS_AS(subchannel_gains(cir, 4), std::invalid_argument);
}

TEST_CASE("subchannel_gains equals f0 h0 + fL hL with sqrt(N) F columns") {
  const int n = 64, l = 16;
  const auto cir = test::two_tap({0.4, 0.3}, l, {-0.9, 0.6});
  const ComplexMatrix f = std::sqrt(static_cast<double>(n)) * dft_matrix(n);
  const ComplexVector expected = f.col(0) * cir.tap(0) + f.col(l) * cir.tap(l);
  CHECK((subchannel_gains(cir, n) - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("periodic_alias folds delays onto the circulant period") {
  const auto cir = test::two_tap({1.0, 0.0}, 8, {0.5, 0.5});
  const auto folded = periodic_alias(cir, 8);
  REQUIRE(folded.n_taps() == 1);
  CHECK(std::abs(folded.tap(0) - Complex(1.5, 0.5)) < 1e-15);
  SystemConfig cfg = test::small_config(8, 8);
  const ComplexMatrix circ = effective_circulant(cir, cfg);
  CHECK((circ - Complex(1.5, 0.5) * ComplexMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("diagonalization over random draws and grid sizes") {
  double worst_off = 0.0, worst_diag = 0.0;
  std::uint64_t stream = 0;
  for (int n : {16, 32, 64}) {
    const ComplexMatrix f = dft_matrix(n);
    for (int l = 1; l <= n / 4; ++l) {
      for (bool sic : {true, false}) {
        SystemConfig cfg = test::small_config(n, l);
        if (!sic) {
          if (2 * l > n) continue;
          cfg.full_sic = false;
          cfg.theta = 0.0;
          cfg.n_cp = 2 * l;
        }
        const ChannelDraw d = draw_channels({11, stream++}, cfg);
        const auto cir = equivalent_cir(d, cfg, Receiver::bob);
        const ComplexMatrix lambda = f * effective_circulant(cir, cfg) * f.adjoint();
        worst_off = std::max(worst_off, offdiag_ratio(lambda));
        worst_diag = std::max(worst_diag, (lambda.diagonal() - subchannel_gains(cir, n)).cwiseAbs().maxCoeff());
      }
    }
  }
  CHECK(worst_off < 1e-10);
  CHECK(worst_diag < 1e-10);
}

TEST_CASE("no-relay reduction") {
  SystemConfig cfg = default_config();
  cfg.psd_relay = 0.0;
  const ChannelDraw d = draw_channels({5, 1}, cfg);
  const auto cir = equivalent_cir(d, cfg, Receiver::bob);
  CHECK(cir.tap(cfg.l_proc) == Complex{});
  const ComplexMatrix h = effective_circulant(cir, cfg);
  CHECK((h - d.h_ab * ComplexMatrix::Identity(64, 64)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("config validation") {
  SystemConfig cfg = default_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.n_cp = 8;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = default_config();
  cfg.n_cp = 20;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);  // theta > 0 needs n_cp == l_proc
  cfg.theta = 0.0;
  CHECK_NOTHROW(cfg.validate());
  cfg.theta = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = default_config();
  cfg.var_ab = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = default_config();
  cfg.noise_psd_bob = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = default_config();
  cfg.full_sic = false;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);  // 2 l_proc > n_cp
}

TEST_CASE("with_delay_and_cp holds the per-sample PSD fixed") {
  const SystemConfig base = default_config();
  const SystemConfig moved = with_delay_and_cp(base, 4);
  CHECK(moved.n_cp == 4);
  CHECK(moved.l_proc == 4);
  CHECK(moved.symbol_psd_alice() == doctest::Approx(base.symbol_psd_alice()).epsilon(1e-15));
  CHECK(moved.symbol_psd_relay() == doctest::Approx(base.symbol_psd_relay()).epsilon(1e-15));
  CHECK(base.symbol_psd_alice() == doctest::Approx(1000.0));
}
