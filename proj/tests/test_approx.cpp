#include <doctest.h>

#include <cmath>

#include "pinnball/approx.hpp"

using namespace pinnball;

namespace {

RepresentedTarget diag_target(std::size_t d, std::size_t m) {
  ModelConfig cfg;
  cfg.d = d;
  cfg.m = m;
  cfg.alpha = 0.0;
  cfg.beta = 0.5;
  std::vector<double> coeffs(d, 1.0 / std::sqrt(double(d)));
  return RepresentedTarget::constant_field(cfg, coeffs);
}

}  // namespace

TEST_CASE("construction coefficients respect the per-row bound") {
  const RepresentedTarget t = diag_target(3, 128);
  RngStream rng(1, "trial");
  const FmConstruction g = fm_construct(t, rng);
  REQUIRE(g.alphas.rows() == 128);
  const double limit = t.f_norm_upper() / 128.0;
  for (std::size_t i = 0; i < 128; ++i)
    CHECK(norm2(g.alphas.row(i)) <= limit * (1.0 + 1e-12));
}

TEST_CASE("zero coefficient field constructs the zero function") {
  ModelConfig cfg;
  cfg.d = 2;
  cfg.m = 32;
  std::vector<double> zeros(2, 0.0);
  const RepresentedTarget t = RepresentedTarget::constant_field(cfg, zeros);
  RngStream rng(2, "trial");
  const FmConstruction g = fm_construct(t, rng);
  RngStream xrng(3, "test");
  const Points pts = sample_unit_ball(xrng, 2, 20);
  for (std::size_t i = 0; i < pts.count; ++i) CHECK(g.eval(pts[i]) == 0.0);
}

// E[g(x)] = f(x): mean over constructions vs the pointwise oracle
TEST_CASE("constructions are unbiased for the represented target") {
  RepresentedTarget t = diag_target(2, 64);
  t.oracle_draws = 10'000'000;
  RngStream xrng(4, "test");
  const Points pts = sample_unit_ball(xrng, 2, 10);

  const std::size_t n_constructions = 10'000;
  RngStream root(5, "trials");
  std::vector<double> mean(pts.count, 0.0), m2(pts.count, 0.0);
  for (std::size_t c = 0; c < n_constructions; ++c) {
    RngStream rng = root.substream(c);
    const FmConstruction g = fm_construct(t, rng);
    for (std::size_t i = 0; i < pts.count; ++i) {
      const double v = g.eval(pts[i]);
      const double delta = v - mean[i];
      mean[i] += delta / double(c + 1);
      m2[i] += delta * (v - mean[i]);
    }
  }
  for (std::size_t i = 0; i < pts.count; ++i) {
    const double oracle = t.value(pts[i]);
    const double se_mean =
        std::sqrt(m2[i] / double(n_constructions - 1) / double(n_constructions));
    // oracle noise: single-draw spread over sqrt(draws), same alpha field
    const double se_oracle = std::sqrt(m2[i] / double(n_constructions - 1)) *
                             std::sqrt(64.0 / double(t.oracle_draws));
    const double tol = 3.0 * std::sqrt(se_mean * se_mean + se_oracle * se_oracle);
    CHECK(std::abs(mean[i] - oracle) <= tol + 1e-15);
  }
}

TEST_CASE("approximation experiment meets the high-probability bound") {
  const RepresentedTarget t = diag_target(2, 64);
  ApproxOptions opt;
  opt.trials = 120;
  opt.n_eval = 256;
  opt.k_ref = 100'000;
  opt.decoupled_k = {64, 128, 256, 512, 1024};
  opt.decoupled_trials = 20;
  opt.decoupled_m0 = 128;
  opt.seed = 6;
  const ApproxResult res = fm_approx_experiment(t, {64, 256}, opt);
  REQUIRE(res.cells.size() == 2);
  for (const auto& cell : res.cells) {
    CHECK(cell.fail_fraction <= opt.delta + 0.05);
    CHECK(cell.mean_err > 0.0);
    CHECK(cell.mean_err < cell.bound);
  }
  // error shrinks with m at the coupled rate's sign, at least
  CHECK(res.cells[1].mean_err < res.cells[0].mean_err);
  CHECK(res.decoupled_slope < -0.35);
  CHECK(res.decoupled_slope > -0.65);
}

TEST_CASE("approximation experiment rejects too few trials") {
  const RepresentedTarget t = diag_target(2, 64);
  ApproxOptions opt;
  opt.trials = 10;
  CHECK_THROWS_AS(fm_approx_experiment(t, {64}, opt), std::invalid_argument);
}

TEST_CASE("concentration failure fraction stays below delta") {
  const auto res = concentration_test(1.0, 3, 400, 0.1, 2000, 7);
  CHECK(res.fail_fraction <= 0.1);
  CHECK(res.err_median > 0.0);
  CHECK(res.err_median < res.bound);
}

TEST_CASE("point-mass distribution never fails") {
  const auto res = concentration_test(1.0, 3, 400, 0.1, 1000, 8,
                                      /*point_mass_prob=*/1.0);
  CHECK(res.fail_fraction == 0.0);
  CHECK(res.err_median <= 1e-12);
}

TEST_CASE("error quantiles scale linearly in the bound C") {
  const auto r1 = concentration_test(1.0, 4, 200, 0.1, 1500, 9);
  const auto r2 = concentration_test(2.0, 4, 200, 0.1, 1500, 9);
  CHECK(r2.err_median / r1.err_median == doctest::Approx(2.0).epsilon(0.2));
  CHECK(r2.err_q90 / r1.err_q90 == doctest::Approx(2.0).epsilon(0.2));
}
