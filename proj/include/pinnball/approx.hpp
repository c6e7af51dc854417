#pragma once

// Monte-Carlo construction of finite mixtures over the random basis,
// the high-probability approximation-rate experiment, and the vector
// concentration check that underpins it.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinnball/geometry.hpp"
#include "pinnball/matrix.hpp"
#include "pinnball/model.hpp"
#include "pinnball/rng.hpp"
#include "pinnball/stats.hpp"
#include "pinnball/target.hpp"
#include "pinnball/theory.hpp"

namespace pinnball {

// g(x) = sum_i alpha_i . zeta(x; theta_i) with alpha_i = alpha(theta_i)/(k p)
struct FmConstruction {
  std::vector<BasisParam> thetas;
  Matrix alphas;  // row i = alpha_i

  double eval(std::span<const double> x) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      const double br = zeta_bracket(thetas[i], x);
      if (br != 0.0) acc += br * dot(alphas.row(i), x);
    }
    return acc;
  }
};

// k i.i.d. basis draws; importance weights make E[g] = f and bound
// ||alpha_i|| <= f_norm_upper / k
inline FmConstruction fm_construct(const RepresentedTarget& target,
                                   std::size_t k, RngStream& rng) {
  if (k < 1) throw std::invalid_argument("fm_construct: k >= 1");
  FmConstruction g;
  g.thetas.reserve(k);
  g.alphas = Matrix(k, target.cfg.d);
  const double scale = target.cfg.lambda_volume() / double(k);
  std::vector<double> av(target.cfg.d);
  for (std::size_t i = 0; i < k; ++i) {
    g.thetas.push_back(draw_basis_param(target.cfg, rng));
    target.alpha_field(g.thetas.back(), av);
    for (std::size_t j = 0; j < target.cfg.d; ++j)
      g.alphas(i, j) = av[j] * scale;
  }
  return g;
}

inline FmConstruction fm_construct(const RepresentedTarget& target,
                                   RngStream& rng) {
  return fm_construct(target, target.cfg.m, rng);
}

namespace detail {

// values of a size-k construction's expectation target at fixed points,
// via one large reference construction
inline std::vector<double> reference_values(const RepresentedTarget& target,
                                            const Points& pts,
                                            std::size_t k_ref,
                                            RngStream& rng) {
  std::vector<double> vals(pts.count, 0.0);
  std::vector<double> av(target.cfg.d);
  const double scale = target.cfg.lambda_volume() / double(k_ref);
  for (std::size_t r = 0; r < k_ref; ++r) {
    const BasisParam th = draw_basis_param(target.cfg, rng);
    target.alpha_field(th, av);
    for (std::size_t i = 0; i < pts.count; ++i) {
      const double br = zeta_bracket(th, pts[i]);
      if (br != 0.0) vals[i] += br * dot(av, pts[i]) * scale;
    }
  }
  return vals;
}

inline double l2_error(const FmConstruction& g, const Points& pts,
                       std::span<const double> ref) {
  double acc = 0.0;
  for (std::size_t i = 0; i < pts.count; ++i) {
    const double r = g.eval(pts[i]) - ref[i];
    acc += r * r;
  }
  return std::sqrt(acc / double(pts.count));
}

}  // namespace detail

struct ApproxOptions {
  std::size_t trials = 500;
  double delta = 0.1;
  std::size_t n_eval = 512;      // Monte-Carlo points for the L2 error
  std::size_t k_ref = 400'000;   // reference construction size
  std::vector<std::size_t> decoupled_k = {64, 128, 256, 512, 1024, 2048, 4096};
  std::size_t decoupled_trials = 30;
  std::size_t decoupled_m0 = 256;  // box scale frozen here
  std::uint64_t seed = 99;
};

struct ApproxCell {
  std::size_t m = 0;
  double bound = 0.0;  // rhs of the high-probability inequality
  double fail_fraction = 0.0;
  double mean_err = 0.0;
  double max_err = 0.0;
};

struct ApproxResult {
  std::vector<ApproxCell> cells;
  std::vector<std::size_t> decoupled_k;
  std::vector<double> decoupled_err;  // mean L2 error per k
  double decoupled_slope = 0.0;
};

// Coupled experiment: for each grid width m the box, the target and the
// construction size all move together. Decoupled experiment: the box is
// frozen at m0 and only the number of sampled basis elements varies,
// isolating the 1/sqrt(k) concentration rate.
inline ApproxResult fm_approx_experiment(const RepresentedTarget& prototype,
                                         const std::vector<std::size_t>& m_grid,
                                         const ApproxOptions& opt) {
  if (opt.trials < 100)
    throw std::invalid_argument("fm_approx_experiment: trials >= 100");
  if (!(opt.delta > 0.0) || !(opt.delta < 1.0))
    throw std::invalid_argument("fm_approx_experiment: delta in (0,1)");
  ApproxResult out;
  const double cd = constants_cd(prototype.cfg.d).c_d;
  const double tail = 1.0 + std::sqrt(2.0 * std::log(1.0 / opt.delta));
  RngStream root(opt.seed, "fm-approx");

  std::uint64_t cell_id = 0;
  for (std::size_t m : m_grid) {
    RepresentedTarget target = prototype;
    target.cfg.m = m;
    ApproxCell cell;
    cell.m = m;
    cell.bound = cd * target.f_norm_upper() *
                 std::pow(double(m),
                          -target.cfg.alpha - 2.0 * target.cfg.beta - 0.5) *
                 tail;

    RngStream eval_rng = root.substream(cell_id * 4 + 0);
    RngStream ref_rng = root.substream(cell_id * 4 + 1);
    RngStream trial_rng = root.substream(cell_id * 4 + 2);
    const Points pts = sample_unit_ball(eval_rng, target.cfg.d, opt.n_eval);
    const auto ref = detail::reference_values(target, pts, opt.k_ref, ref_rng);

    std::size_t failures = 0;
    double err_sum = 0.0, err_max = 0.0;
    for (std::size_t t = 0; t < opt.trials; ++t) {
      RngStream tr = trial_rng.substream(t);
      const FmConstruction g = fm_construct(target, m, tr);
      const double err = detail::l2_error(g, pts, ref);
      if (err > cell.bound) ++failures;
      err_sum += err;
      err_max = std::max(err_max, err);
    }
    cell.fail_fraction = double(failures) / double(opt.trials);
    cell.mean_err = err_sum / double(opt.trials);
    cell.max_err = err_max;
    out.cells.push_back(cell);
    ++cell_id;
  }

  // decoupled rate: frozen box, k sampled elements
  {
    RepresentedTarget target = prototype;
    target.cfg.m = opt.decoupled_m0;
    RngStream eval_rng = root.substream(1'000'001);
    RngStream ref_rng = root.substream(1'000'002);
    RngStream trial_rng = root.substream(1'000'003);
    const Points pts = sample_unit_ball(eval_rng, target.cfg.d, opt.n_eval);
    const auto ref = detail::reference_values(target, pts, opt.k_ref, ref_rng);
    for (std::size_t kk = 0; kk < opt.decoupled_k.size(); ++kk) {
      const std::size_t k = opt.decoupled_k[kk];
      double err_sum = 0.0;
      for (std::size_t t = 0; t < opt.decoupled_trials; ++t) {
        RngStream tr = trial_rng.substream(kk * 100'000 + t);
        const FmConstruction g = fm_construct(target, k, tr);
        err_sum += detail::l2_error(g, pts, ref);
      }
      out.decoupled_k.push_back(k);
      out.decoupled_err.push_back(err_sum / double(opt.decoupled_trials));
    }
    std::vector<double> kd(out.decoupled_k.begin(), out.decoupled_k.end());
    out.decoupled_slope = fit_loglog_slope(kd, out.decoupled_err);
  }
  return out;
}

// ---- vector concentration ------------------------------------------------

struct ConcentrationResult {
  double fail_fraction = 0.0;
  double bound = 0.0;
  double err_median = 0.0;
  double err_q90 = 0.0;
};

// Draws per trial m i.i.d. vectors in R^k bounded by C: a point mass at
// (C/2) e_1 with probability point_mass_prob, otherwise uniform on the
// radius-C sphere. The mean is known in closed form, so each trial
// checks the concentration inequality exactly.
inline ConcentrationResult concentration_test(double C, std::size_t k,
                                              std::size_t m, double delta,
                                              std::size_t trials,
                                              std::uint64_t seed,
                                              double point_mass_prob = 0.5) {
  if (trials < 1000)
    throw std::invalid_argument("concentration_test: trials >= 1000");
  if (!(C > 0.0) || k < 1 || m < 1)
    throw std::invalid_argument("concentration_test: C > 0, k,m >= 1");
  if (point_mass_prob < 0.0 || point_mass_prob > 1.0)
    throw std::invalid_argument("concentration_test: prob in [0,1]");

  ConcentrationResult out;
  out.bound = C / std::sqrt(double(m)) *
              (1.0 + std::sqrt(2.0 * std::log(1.0 / delta)));
  std::vector<double> mean_vec(k), draw(k), errs(trials);
  std::vector<double> expectation(k, 0.0);
  expectation[0] = point_mass_prob * (C / 2.0);

  RngStream root(seed, "concentration");
  std::size_t failures = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    RngStream rng = root.substream(t);
    std::fill(mean_vec.begin(), mean_vec.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      if (rng.uniform() < point_mass_prob) {
        mean_vec[0] += C / 2.0;
      } else {
        double nrm2 = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
          draw[j] = rng.normal();
          nrm2 += draw[j] * draw[j];
        }
        const double scale = C / std::sqrt(nrm2);
        for (std::size_t j = 0; j < k; ++j) mean_vec[j] += draw[j] * scale;
      }
    }
    double err2 = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double e = mean_vec[j] / double(m) - expectation[j];
      err2 += e * e;
    }
    errs[t] = std::sqrt(err2);
    if (errs[t] > out.bound) ++failures;
  }
  out.fail_fraction = double(failures) / double(trials);
  std::sort(errs.begin(), errs.end());
  out.err_median = errs[trials / 2];
  out.err_q90 = errs[std::size_t(0.9 * double(trials))];
  return out;
}

}  // namespace pinnball
