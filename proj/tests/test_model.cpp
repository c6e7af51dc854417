#include <doctest.h>

#include <cmath>

#include "pinnball/finite_diff.hpp"
#include "pinnball/geometry.hpp"
#include "pinnball/model.hpp"
#include "pinnball/theory.hpp"

using namespace pinnball;

namespace {

ModelParams single_neuron(std::size_t d, double a, double w, double b) {
  ModelParams p;
  p.cfg.d = d;
  p.cfg.m = 1;
  p.a = {a};
  p.b = {b};
  p.w0 = Matrix(1, d);
  for (std::size_t j = 0; j < d; ++j) p.w0(0, j) = w;
  p.w = p.w0;
  return p;
}

ModelParams random_model(std::size_t d, std::size_t m, double alpha,
                         double beta, std::uint64_t seed) {
  ModelConfig cfg;
  cfg.d = d;
  cfg.m = m;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.seed = seed;
  RngStream rng(seed, "init");
  return init_params(cfg, rng);
}

}  // namespace

TEST_CASE("initialization respects the box bounds") {
  ModelConfig cfg;
  cfg.d = 3;
  cfg.m = 100;
  cfg.alpha = 0.0;
  cfg.beta = 0.5;
  RngStream rng(5, "init");
  const ModelParams p = init_params(cfg, rng);
  for (std::size_t i = 0; i < cfg.m; ++i) {
    CHECK(std::abs(p.a[i]) <= 1.0);
    CHECK(std::abs(p.b[i]) <= 0.1);
    for (std::size_t j = 0; j < cfg.d; ++j) CHECK(std::abs(p.w0(i, j)) <= 0.1);
  }
  CHECK(p.w == p.w0);
}

TEST_CASE("initialization is reproducible") {
  ModelConfig cfg;
  cfg.m = 50;
  RngStream r1(9, "init"), r2(9, "init");
  const ModelParams p1 = init_params(cfg, r1);
  const ModelParams p2 = init_params(cfg, r2);
  CHECK(p1.a == p2.a);
  CHECK(p1.b == p2.b);
  CHECK(p1.w0 == p2.w0);
}

TEST_CASE("output weights are centered") {
  ModelConfig cfg;
  cfg.d = 1;
  cfg.m = 1'000'000;
  cfg.alpha = 0.0;
  RngStream rng(123, "init");
  const ModelParams p = init_params(cfg, rng);
  double mean = 0.0;
  for (double a : p.a) mean += a;
  mean /= double(cfg.m);
  CHECK(std::abs(mean) < 0.004);  // 3 sigma / sqrt(m) for U(-1,1)
}

TEST_CASE("phi vanishes exactly on the boundary") {
  const ModelParams p = random_model(3, 32, 0.0, 0.5, 2);
  RngStream rng(3, "test");
  const Points pts = sample_unit_sphere_exact(rng, 3, 200);
  for (std::size_t i = 0; i < pts.count; ++i)
    CHECK(eval_phi(p, pts[i]) == 0.0);
}

TEST_CASE("phi single-neuron hand value") {
  const ModelParams p = single_neuron(3, 1.0, 0.0, 1.0);
  const std::vector<double> zero(3, 0.0);
  CHECK(eval_phi(p, zero) == -1.0);

  const ModelParams inactive = single_neuron(3, 1.0, 0.0, -1.0);
  const std::vector<double> x = {0.1, 0.2, 0.3};
  CHECK(eval_phi(inactive, x) == 0.0);
}

TEST_CASE("psi single-neuron hand value") {
  const ModelParams p = single_neuron(3, 1.0, 0.0, 1.0);
  const std::vector<double> x = {0.3, -0.2, 0.1};
  CHECK(eval_psi(p, x) == doctest::Approx(6.0));

  const ModelParams inactive = single_neuron(3, 1.0, 0.0, -0.5);
  CHECK(eval_psi(inactive, x) == 0.0);
}

TEST_CASE("psi matches the finite-difference laplacian of phi") {
  RngStream xrng(11, "test");
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 50; ++seed) {
    const ModelParams p = random_model(3, 16, 0.0, 0.5, 100 + seed);
    const Points pts = sample_unit_ball(xrng, 3, 1);
    auto x = pts[0];
    if (norm2(x) > 0.9) continue;                      // keep x +/- h inside
    if (min_activation_margin(p, x) < 1e-3) continue;  // away from kinks
    const double psi = eval_psi(p, x);
    const double lap = fd_laplacian(
        [&](std::span<const double> y) { return eval_phi(p, y); }, x, 1e-4);
    CHECK(std::abs(psi - lap) / (1.0 + std::abs(psi)) < 1e-4);
    ++checked;
  }
}

TEST_CASE("zeta vanishes at the origin and under inactive gates") {
  BasisParam th;
  th.a0 = 0.7;
  th.w0 = {0.05, -0.02, 0.01};
  th.b0 = 0.03;
  const std::vector<double> zero(3, 0.0);
  for (double z : eval_zeta(th, zero)) CHECK(z == 0.0);

  th.b0 = -10.0;  // gate closed everywhere on the ball
  const std::vector<double> x = {0.5, 0.1, -0.2};
  for (double z : eval_zeta(th, x)) CHECK(z == 0.0);
}

// scale bound over the box, 1e5 random draws
TEST_CASE("zeta norm respects the dimension-constant bound") {
  ModelConfig cfg;
  cfg.d = 3;
  cfg.m = 64;
  cfg.alpha = 0.0;
  cfg.beta = 0.5;
  const double cd = constants_cd(cfg.d).c_d;
  const double limit = cd * std::pow(double(cfg.m), -cfg.alpha - 2.0 * cfg.beta);
  RngStream trng(21, "test");
  RngStream xrng(22, "test");
  const Points pts = sample_unit_ball(xrng, cfg.d, 100'000);
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.count; ++i) {
    const BasisParam th = draw_basis_param(cfg, trng);
    const auto z = eval_zeta(th, pts[i]);
    worst = std::max(worst, norm2(z));
  }
  CHECK(worst <= limit);
}

TEST_CASE("pseudo network equals psi at the initialization, bit for bit") {
  const ModelParams p = random_model(3, 128, 0.0, 0.5, 31);
  RngStream xrng(32, "test");
  const Points pts = sample_unit_ball(xrng, 3, 500);
  for (std::size_t i = 0; i < pts.count; ++i)
    CHECK(eval_pseudo_g(p, pts[i]) == eval_psi(p, pts[i]));
}

TEST_CASE("pseudo network affine decomposition") {
  ModelParams p = random_model(3, 64, 0.0, 0.5, 41);
  RngStream wrng(42, "test");
  Matrix wprime(64, 3);
  for (std::size_t i = 0; i < wprime.rows(); ++i)
    for (std::size_t j = 0; j < 3; ++j)
      wprime(i, j) = wrng.uniform(-0.05, 0.05);

  RngStream xrng(43, "test");
  const Points pts = sample_unit_ball(xrng, 3, 100);
  for (std::size_t i = 0; i < pts.count; ++i) {
    const auto x = pts[i];
    const double psi0 = eval_psi(p, x);  // W == W0 here
    const double gb = eval_pseudo_gb(p, wprime, x);
    ModelParams shifted = p;
    for (std::size_t r = 0; r < 64; ++r)
      for (std::size_t c = 0; c < 3; ++c)
        shifted.w(r, c) = p.w0(r, c) + wprime(r, c);
    CHECK(std::abs(eval_pseudo_g(shifted, x) - (gb + psi0)) < 1e-10);
  }
}

TEST_CASE("g_b is linear in W' and zero at zero") {
  const ModelParams p = random_model(2, 32, 0.0, 0.5, 51);
  RngStream rng(52, "test");
  Matrix w1(32, 2), w2(32, 2);
  for (std::size_t i = 0; i < 32; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      w1(i, j) = rng.uniform(-0.1, 0.1);
      w2(i, j) = rng.uniform(-0.1, 0.1);
    }
  const Points pts = sample_unit_ball(rng, 2, 50);
  const double c1 = 0.7, c2 = -1.3;
  Matrix combo(32, 2);
  for (std::size_t i = 0; i < 32; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      combo(i, j) = c1 * w1(i, j) + c2 * w2(i, j);
  for (std::size_t i = 0; i < pts.count; ++i) {
    const auto x = pts[i];
    CHECK(std::abs(eval_pseudo_gb(p, combo, x) -
                   (c1 * eval_pseudo_gb(p, w1, x) +
                    c2 * eval_pseudo_gb(p, w2, x))) < 1e-12);
  }
  Matrix zero(32, 2);
  CHECK(eval_pseudo_gb(p, zero, pts[0]) == 0.0);
}

// row-sum identity from the basis representation
TEST_CASE("g_b equals the sum of row-basis inner products") {
  ModelConfig cfg;
  cfg.d = 3;
  cfg.m = 32;
  cfg.alpha = 0.0;
  cfg.beta = 0.5;
  RngStream rng(61, "init");
  const ModelParams p = init_params(cfg, rng);
  Matrix alphas(32, 3);
  RngStream arng(62, "test");
  for (std::size_t i = 0; i < 32; ++i)
    for (std::size_t j = 0; j < 3; ++j) alphas(i, j) = arng.uniform(-1.0, 1.0);

  RngStream xrng(63, "test");
  const Points pts = sample_unit_ball(xrng, 3, 50);
  for (std::size_t n = 0; n < pts.count; ++n) {
    const auto x = pts[n];
    double direct = 0.0;
    for (std::size_t i = 0; i < 32; ++i) {
      BasisParam th;
      th.a0 = p.a[i];
      th.w0.assign(p.w0.row(i).begin(), p.w0.row(i).end());
      th.b0 = p.b[i];
      direct += dot(alphas.row(i), eval_zeta(th, x));
    }
    CHECK(std::abs(eval_pseudo_gb(p, alphas, x) - direct) < 1e-12);
  }
}

TEST_CASE("gradient hand value: single neuron gives 30x") {
  const ModelParams p = single_neuron(3, 1.0, 0.0, 1.0);
  const std::vector<double> x = {0.2, -0.3, 0.1};
  const Matrix g = grad_psi_w(p, x);
  for (std::size_t j = 0; j < 3; ++j)
    CHECK(g(0, j) == doctest::Approx(30.0 * x[j]));
}

TEST_CASE("gradient vanishes with inactive gates") {
  const ModelParams p = single_neuron(3, 1.0, 0.0, -1.0);
  const std::vector<double> x = {0.2, -0.3, 0.1};
  const Matrix g = grad_psi_w(p, x);
  for (std::size_t j = 0; j < 3; ++j) CHECK(g(0, j) == 0.0);
}

TEST_CASE("analytic psi gradient matches finite differences") {
  RngStream xrng(71, "test");
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 30; ++seed) {
    const ModelParams p = random_model(3, 8, 0.0, 0.5, 200 + seed);
    const Points pts = sample_unit_ball(xrng, 3, 1);
    const auto x = pts[0];
    if (min_activation_margin(p, x) < 1e-4) continue;
    const Matrix ga = grad_psi_w(p, x);
    const Matrix gf = fd_gradient(
        [&](const Matrix& w) {
          ModelParams q = p;
          q.w = w;
          return eval_psi(q, x);
        },
        p.w, 1e-6);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ga.rows(); ++i)
      for (std::size_t j = 0; j < ga.cols(); ++j) {
        num += (ga(i, j) - gf(i, j)) * (ga(i, j) - gf(i, j));
        den += ga(i, j) * ga(i, j);
      }
    CHECK(std::sqrt(num) <= 1e-5 * std::sqrt(den) + 1e-12);
    ++checked;
  }
}

TEST_CASE("loss gradient is zero at a perfect fit") {
  const ModelParams p = random_model(2, 16, 0.0, 0.5, 81);
  RngStream xrng(82, "test");
  const Points pts = sample_unit_ball(xrng, 2, 5);
  for (std::size_t i = 0; i < pts.count; ++i) {
    const double label = eval_psi(p, pts[i]);
    const Matrix g = loss_grad_w(p, pts[i], label);
    for (std::size_t r = 0; r < g.rows(); ++r)
      for (std::size_t c = 0; c < g.cols(); ++c) CHECK(g(r, c) == 0.0);
  }
}

TEST_CASE("loss gradient matches finite differences of the squared residual") {
  RngStream xrng(91, "test");
  RngStream lrng(92, "test");
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 30; ++seed) {
    const ModelParams p = random_model(3, 8, 0.0, 0.5, 300 + seed);
    const Points pts = sample_unit_ball(xrng, 3, 1);
    const auto x = pts[0];
    if (min_activation_margin(p, x) < 1e-4) continue;
    const double label = lrng.uniform(-1.0, 1.0);
    const Matrix ga = loss_grad_w(p, x, label);
    const Matrix gf = fd_gradient(
        [&](const Matrix& w) {
          ModelParams q = p;
          q.w = w;
          const double r = eval_psi(q, x) - label;
          return r * r;
        },
        p.w, 1e-6);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ga.rows(); ++i)
      for (std::size_t j = 0; j < ga.cols(); ++j) {
        num += (ga(i, j) - gf(i, j)) * (ga(i, j) - gf(i, j));
        den += ga(i, j) * ga(i, j);
      }
    CHECK(std::sqrt(num) <= 1e-5 * std::sqrt(den) + 1e-12);
    ++checked;
  }
}

TEST_CASE("pseudo-network gradient matches finite differences") {
  const ModelParams base = random_model(3, 8, 0.0, 0.5, 95);
  ModelParams p = base;
  RngStream wrng(96, "test");
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      p.w(i, j) = base.w0(i, j) + wrng.uniform(-0.02, 0.02);
  RngStream xrng(97, "test");
  const Points pts = sample_unit_ball(xrng, 3, 10);
  for (std::size_t n = 0; n < pts.count; ++n) {
    const auto x = pts[n];
    const double label = 0.3;
    const Matrix ga = loss_grad_pseudo_g_w(p, x, label);
    const Matrix gf = fd_gradient(
        [&](const Matrix& w) {
          ModelParams q = p;
          q.w = w;
          const double r = eval_pseudo_g(q, x) - label;
          return r * r;
        },
        p.w, 1e-6);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ga.rows(); ++i)
      for (std::size_t j = 0; j < ga.cols(); ++j) {
        num += (ga(i, j) - gf(i, j)) * (ga(i, j) - gf(i, j));
        den += ga(i, j) * ga(i, j);
      }
    CHECK(std::sqrt(num) <= 1e-5 * std::sqrt(den) + 1e-12);
  }
}
