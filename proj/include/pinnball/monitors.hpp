#pragma once

// Trajectory monitors: weight drift, the psi-vs-pseudo-network value gap
// and the (2,1)-norm loss-gradient gap on a probe set, plus the
// empirical generalization gap and small fitting helpers.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinnball/dataset.hpp"
#include "pinnball/geometry.hpp"
#include "pinnball/model.hpp"
#include "pinnball/stats.hpp"

namespace pinnball {

struct GapRecord {
  std::size_t iter = 0;
  double drift = 0.0;      // max_i ||w_i - w0_i||
  double psi_g_gap = 0.0;  // max over probe of |psi - g|
  double grad_gap = 0.0;   // max over probe of ||grad L(psi) - grad L(g)||_{2,1}
};

inline GapRecord gap_monitor(const ModelParams& p, const Points& probe,
                             std::span<const double> probe_labels) {
  if (probe.count != probe_labels.size())
    throw std::invalid_argument("gap_monitor: probe/label size mismatch");
  GapRecord rec;
  rec.drift = max_row_distance(p.w, p.w0);
  for (std::size_t i = 0; i < probe.count; ++i) {
    const auto x = probe[i];
    rec.psi_g_gap = std::max(
        rec.psi_g_gap, std::abs(eval_psi(p, x) - eval_pseudo_g(p, x)));
    const Matrix gp = loss_grad_w(p, x, probe_labels[i]);
    const Matrix gg = loss_grad_pseudo_g_w(p, x, probe_labels[i]);
    double acc = 0.0;
    for (std::size_t r = 0; r < gp.rows(); ++r) {
      double row_sq = 0.0;
      for (std::size_t c = 0; c < gp.cols(); ++c) {
        const double dij = gp(r, c) - gg(r, c);
        row_sq += dij * dij;
      }
      acc += std::sqrt(row_sq);
    }
    rec.grad_gap = std::max(rec.grad_gap, acc);
  }
  return rec;
}

// |expected - empirical| for the current model
inline double generalization_gap(const ModelParams& p, const Dataset& data,
                                 const TargetFunction& f, std::size_t n_test,
                                 RngStream& rng) {
  return std::abs(expected_loss(p, f, n_test, rng) - empirical_loss(p, data));
}

inline double generalization_gap(const ModelParams& p, const Dataset& data,
                                 const Points& test_pts,
                                 std::span<const double> test_labels) {
  return std::abs(expected_loss(p, test_pts, test_labels) -
                  empirical_loss(p, data));
}

}  // namespace pinnball
