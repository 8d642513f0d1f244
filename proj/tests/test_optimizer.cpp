#include <doctest.h>

#include "fdsec/optimizer.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace fdsec;

namespace {

SweepResult from_means(std::vector<double> means, double se) {
  SweepResult r;
  for (std::size_t i = 0; i < means.size(); ++i) {
    SweepPoint p;
    p.parameter = static_cast<double>(i + 1);
    p.throughput.mean = means[i];
    p.throughput.std_error = se;
    p.throughput.ci95_low = means[i] - 1.96 * se;
    p.throughput.ci95_high = means[i] + 1.96 * se;
    r.points.push_back(p);
  }
  finalize_argmax(r);
  return r;
}

}  // namespace

TEST_CASE("default grids") {
  CHECK(default_lproc_grid() == std::vector<int>{1, 2, 4, 8, 12, 16, 24, 32, 48, 64});
  const auto rates = default_rate_grid();
  REQUIRE(rates.size() == 20);
  CHECK(rates.front() == 0.5);
  CHECK(rates.back() == 10.0);
}

TEST_CASE("argmax ties go to the smaller parameter") {
  const SweepResult r = from_means({0.1, 0.5, 0.5, 0.2}, 0.0);
  CHECK(r.argmax == 2.0);
  CHECK(r.max_throughput.mean == 0.5);
}

TEST_CASE("unimodality within CI") {
  CHECK(unimodal_within_ci(from_means({0.1, 0.3, 0.5, 0.4, 0.2}, 0.001)));
  CHECK(unimodal_within_ci(from_means({0.1, 0.3, 0.29, 0.5, 0.2}, 0.01)));
  CHECK_FALSE(unimodal_within_ci(from_means({0.1, 0.3, 0.1, 0.5, 0.2}, 0.001)));
  CHECK_FALSE(unimodal_within_ci(from_means({0.5, 0.1, 0.3}, 0.001)));
  CHECK(nondecreasing_to_argmax_within_ci(from_means({0.5, 0.1, 0.3}, 0.001)));
}

TEST_CASE("sweep_lproc single point and throughput identity") {
  const SystemConfig cfg = default_config();
  const SweepResult one = sweep_lproc(cfg, {1}, 200, 1);
  REQUIRE(one.points.size() == 1);
  CHECK(one.argmax == 1.0);

  const SweepResult r = sweep_lproc(cfg, {2, 8}, 300, 2);
  for (const auto& p : r.points)
    CHECK(p.throughput.mean == doctest::Approx(cfg.target_rate * (1.0 - p.sop.mean)).epsilon(1e-15));

  CHECK_THROWS_AS(sweep_lproc(cfg, {}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sweep_lproc(cfg, {0}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sweep_lproc(cfg, {65}, 10, 1), std::invalid_argument);
}

TEST_CASE("sweep_target_rate limits and monotone SOP") {
  const SystemConfig cfg = test::small_config(32, 8);
  const SweepResult r = sweep_target_rate(cfg, {1e-6, 0.5, 1.0, 2.0, 4.0, 50.0}, 400, 3);
  CHECK(r.points.front().throughput.mean < 1e-5);
  CHECK(r.points.back().throughput.mean == 0.0);
  for (std::size_t i = 1; i < r.points.size(); ++i) CHECK(r.points[i].sop.mean >= r.points[i - 1].sop.mean);
  CHECK_THROWS_AS(sweep_target_rate(cfg, {2.0, 1.0}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sweep_target_rate(cfg, {0.0}, 10, 1), std::invalid_argument);
}

TEST_CASE("benchmark_suite structure") {
  SystemConfig cfg = default_config();
  const std::vector<int> grid{1, 4, 16};
  const auto suite = benchmark_suite(cfg, grid, 200, 4);
  REQUIRE(suite.size() == 4);
  CHECK(suite[0].label == "proposed");
  CHECK(suite[1].label == "lproc_1");
  CHECK(suite[2].label == "no_relay");
  CHECK(suite[3].label == "relay_without_an");
  for (const auto& s : suite) {
    REQUIRE(s.result.points.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(s.result.points[i].parameter == grid[i]);
  }
  const auto& fixed = suite[1].result.points;
  CHECK(fixed[0].throughput.mean == fixed[2].throughput.mean);
}

TEST_CASE("no-relay throughput follows the CP-overhead law") {
  // Without relay or AN only the prelog N / (N + v) changes with v, so at a
  // low target every grid point sees the same channels scaled in rate.
  SystemConfig cfg = default_config();
  cfg.psd_relay = 0.0;
  cfg.theta = 0.0;
  cfg.target_rate = 1.0;
  const SweepResult r = sweep_lproc(cfg, {1, 4, 16, 32, 64}, 4000, 5);
  for (std::size_t i = 1; i < r.points.size(); ++i)
    CHECK(r.points[i].throughput.mean <= r.points[i - 1].throughput.mean);
}

TEST_CASE("without AN the delay only costs CP overhead beyond small l_proc") {
  SystemConfig cfg = default_config();
  cfg.theta = 0.0;
  const SweepResult r = sweep_lproc(cfg, {4, 8, 16, 32, 64}, 4000, 6);
  CHECK(nondecreasing_to_argmax_within_ci(r));
  for (std::size_t i = 1; i < r.points.size(); ++i) {
    const auto& prev = r.points[i - 1].throughput;
    const auto& cur = r.points[i].throughput;
    CHECK((cur.mean <= prev.mean || cur.ci95_low <= prev.ci95_high));
  }
}

TEST_CASE("delay sweep with residual self-interference doubles the prefix") {
  SystemConfig cfg = default_config();
  cfg.full_sic = false;
  cfg.theta = 0.0;
  cfg.n_cp = 32;
  const SystemConfig moved = with_delay_and_cp(cfg, 8);
  CHECK(moved.l_proc == 8);
  CHECK(moved.n_cp == 16);
  const SweepResult r = sweep_lproc(cfg, {1, 8, 32}, 200, 7);
  CHECK(r.points.size() == 3);
  CHECK_THROWS_AS(sweep_lproc(cfg, {48}, 10, 1), std::invalid_argument);
}
