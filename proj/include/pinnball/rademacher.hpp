#pragma once

// Empirical Rademacher complexity of the psi class over the row-wise
// ball ||W'||_{2,inf} <= tau'. The inner supremum is non-concave
// (activation switching), so projected gradient ascent with restarts
// yields a lower estimate; checks against upper bounds stay sound.

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinnball/geometry.hpp"
#include "pinnball/matrix.hpp"
#include "pinnball/model.hpp"
#include "pinnball/rng.hpp"

namespace pinnball {

struct AscentOptions {
  std::size_t restarts = 8;
  std::size_t steps = 200;
  double step_size = 0.0;  // 0 resolves to tau' / 10
};

struct RademacherResult {
  double estimate = 0.0;   // mean over sign draws of the inner maximum
  double std_error = 0.0;  // Monte-Carlo standard error of the mean
  double kappa = 0.0;      // estimate * sqrt(N) / (m^-alpha * tau')
};

namespace detail {

// F(W') = (1/N) sum_n xi_n psi(x_n; W0 + W'), gradient written into g.
// q.w must hold W0 + W'.
inline double signed_objective_and_grad(const ModelParams& q, const Points& X,
                                        std::span<const double> xi,
                                        Matrix* g) {
  const std::size_t m = q.cfg.m, d = q.cfg.d;
  const double two_d = 2.0 * double(d);
  const double six_d = 6.0 * double(d);
  const double inv_n = 1.0 / double(X.count);

  std::vector<double> ww(m);
  for (std::size_t i = 0; i < m; ++i) ww[i] = dot(q.w.row(i), q.w.row(i));

  if (g) *g = Matrix(m, d);
  double obj = 0.0;
  for (std::size_t n = 0; n < X.count; ++n) {
    const auto x = X[n];
    const double xx1 = dot(x, x) - 1.0;
    const double c_n = xi[n] * inv_n;
    double psi_n = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const auto wi = q.w.row(i);
      const double wx = dot(wi, x);
      const double s = wx + q.b[i];
      if (s < 0.0) continue;
      psi_n += q.a[i] * detail::neuron_core(two_d, s, s, wx, ww[i], xx1);
      if (g) {
        const double c1 = six_d * (s * s) + 24.0 * (s * wx) + 12.0 * (s * s) +
                          6.0 * (ww[i] * xx1);
        const double c2 = 12.0 * s * xx1;
        const double k = c_n * q.a[i];
        auto gi = g->row(i);
        for (std::size_t j = 0; j < d; ++j)
          gi[j] += k * (c1 * x[j] + c2 * wi[j]);
      }
    }
    obj += c_n * psi_n;
  }
  return obj;
}

inline void project_rows(Matrix& wprime, double tau) {
  for (std::size_t i = 0; i < wprime.rows(); ++i) {
    const double r = norm2(wprime.row(i));
    if (r > tau) {
      const double sc = tau / r;
      auto row = wprime.row(i);
      for (double& v : row) v *= sc;
    }
  }
}

}  // namespace detail

inline RademacherResult rademacher_estimate(const ModelParams& p,
                                            const Points& X, double tau_prime,
                                            std::size_t n_sign_draws,
                                            const AscentOptions& opt,
                                            std::uint64_t seed) {
  if (tau_prime < 0.0)
    throw std::invalid_argument("rademacher_estimate: tau' >= 0");
  if (n_sign_draws < 1 || X.count < 1)
    throw std::invalid_argument("rademacher_estimate: empty draws or points");
  const std::size_t m = p.cfg.m, d = p.cfg.d;
  const double step =
      opt.step_size > 0.0 ? opt.step_size : tau_prime / 10.0;

  RngStream signs(seed, "signs");
  RngStream starts(seed, "ascent-starts");

  ModelParams q = p;  // q.w = W0 + W'
  Matrix wprime(m, d), grad;
  std::vector<double> xi(X.count);

  const auto apply_wprime = [&]() {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < d; ++j)
        q.w(i, j) = p.w0(i, j) + wprime(i, j);
  };

  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t sdraw = 0; sdraw < n_sign_draws; ++sdraw) {
    for (std::size_t n = 0; n < X.count; ++n)
      xi[n] = signs.uniform() < 0.5 ? -1.0 : 1.0;

    double best;
    if (tau_prime == 0.0) {
      q.w = p.w0;
      best = detail::signed_objective_and_grad(q, X, xi, nullptr);
    } else {
      best = -std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < opt.restarts; ++r) {
        if (r == 0) {
          wprime = Matrix(m, d);  // start at the center
        } else {
          for (std::size_t i = 0; i < m; ++i) {
            double nrm2 = 0.0;
            std::vector<double> dir(d);
            for (std::size_t j = 0; j < d; ++j) {
              dir[j] = starts.normal();
              nrm2 += dir[j] * dir[j];
            }
            const double rad =
                tau_prime * std::pow(starts.uniform(), 1.0 / double(d));
            const double sc = rad / std::sqrt(nrm2);
            for (std::size_t j = 0; j < d; ++j) wprime(i, j) = dir[j] * sc;
          }
        }
        apply_wprime();
        double val = detail::signed_objective_and_grad(q, X, xi, &grad);
        best = std::max(best, val);
        for (std::size_t it = 0; it < opt.steps; ++it) {
          // row-normalized ascent: every active row moves a fixed
          // distance along its own gradient direction
          for (std::size_t i = 0; i < m; ++i) {
            const double gn = norm2(grad.row(i));
            if (gn == 0.0) continue;
            const double sc = step / gn;
            auto wi = wprime.row(i);
            auto gi = grad.row(i);
            for (std::size_t j = 0; j < d; ++j) wi[j] += sc * gi[j];
          }
          detail::project_rows(wprime, tau_prime);
          apply_wprime();
          val = detail::signed_objective_and_grad(q, X, xi, &grad);
          best = std::max(best, val);
        }
      }
    }
    sum += best;
    sum_sq += best * best;
  }

  RademacherResult out;
  out.estimate = sum / double(n_sign_draws);
  const double var =
      std::max(0.0, sum_sq / double(n_sign_draws) - out.estimate * out.estimate);
  out.std_error = std::sqrt(var / double(n_sign_draws));
  if (tau_prime > 0.0)
    out.kappa = out.estimate * std::sqrt(double(X.count)) /
                (std::pow(double(m), -p.cfg.alpha) * tau_prime);
  return out;
}

}  // namespace pinnball
