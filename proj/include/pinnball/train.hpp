#pragma once

// Plain SGD on the hidden weights: one uniformly drawn sample per step,
// constant learning rate, full-loss checkpoints with step-weighted
// running averages, and a blow-up monitor instead of hard failure.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pinnball/dataset.hpp"
#include "pinnball/geometry.hpp"
#include "pinnball/model.hpp"

namespace pinnball {

struct TrainConfig {
  double eta = 0.0;        // if 0, resolved as eta_scale / m
  double eta_scale = 1.0;  // eta = eta_scale / m when eta == 0
  std::size_t T = 100'000;
  std::size_t eval_every = 1'000;
  // denser checkpoints over the initial fast-decay phase; 0 disables
  std::size_t dense_every = 0;
  std::size_t dense_until = 0;
  // evaluate the expected loss only every k-th checkpoint and carry the
  // last value in between (the averages are step-weighted anyway)
  std::size_t expected_stride = 1;
  std::size_t n_test = 100'000;
  double blowup_w_max = 10.0;
  double blowup_psi_max = 1e3;
  std::uint64_t seed = 1;
  bool monitor_gaps = false;      // psi-vs-g gap series at checkpoints
  std::size_t probe_points = 256; // probe set size for the gap monitor

  double resolve_eta(std::size_t m) const {
    return eta > 0.0 ? eta : eta_scale / double(m);
  }

  void validate() const {
    if (eta < 0.0) throw std::invalid_argument("TrainConfig: eta >= 0");
    if (eta == 0.0 && !(eta_scale > 0.0))
      throw std::invalid_argument("TrainConfig: eta_scale > 0");
    if (eval_every < 1) throw std::invalid_argument("TrainConfig: eval_every >= 1");
    if (T > 0 && eval_every > T)
      throw std::invalid_argument("TrainConfig: eval_every <= T");
    if (dense_until > 0 && dense_every < 1)
      throw std::invalid_argument("TrainConfig: dense_every >= 1");
    if (expected_stride < 1)
      throw std::invalid_argument("TrainConfig: expected_stride >= 1");
    if (n_test < 1) throw std::invalid_argument("TrainConfig: n_test >= 1");
    if (!(blowup_w_max > 0.0) || !(blowup_psi_max > 0.0))
      throw std::invalid_argument("TrainConfig: blow-up thresholds > 0");
  }
};

struct CheckpointRecord {
  std::size_t iter = 0;
  double train_loss = 0.0;
  double avg_train_loss = 0.0;
  double expected_loss = 0.0;
  double avg_expected_loss = 0.0;
  double max_drift = 0.0;       // max_i ||w_i - w0_i||
  double drift_envelope = 0.0;  // eta * sum of per-step max row grad norms
  double psi_g_gap = 0.0;       // only when gap monitoring is on
  double grad_gap = 0.0;
};

struct BlowupInfo {
  std::size_t iter = 0;
  std::string reason;
};

struct TrainReport {
  std::vector<CheckpointRecord> records;
  std::optional<BlowupInfo> blowup;
  ModelParams final_params;
  double eta = 0.0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;

  bool blew_up() const { return blowup.has_value(); }
  const CheckpointRecord& final_record() const { return records.back(); }
};

struct StepInfo {
  std::size_t sample_index = 0;
  double psi_at_sample = 0.0;
  double max_row_grad_norm = 0.0;
  bool finite = true;
};

// one SGD step; W is updated in place, a/b/W0 untouched
inline StepInfo sgd_step(ModelParams& p, const Dataset& data, RngStream& rng,
                         double eta, Matrix* scratch = nullptr) {
  if (eta < 0.0) throw std::invalid_argument("sgd_step: eta >= 0");
  StepInfo info;
  info.sample_index = rng.uniform_index(data.size());
  const auto x = data.points[info.sample_index];
  const double label = data.labels[info.sample_index];

  Matrix local;
  Matrix& g = scratch ? *scratch : local;
  const double psi = psi_and_grad(p, x, g);
  info.psi_at_sample = psi;
  const double r = 2.0 * (psi - label);

  double worst = 0.0;
  for (std::size_t i = 0; i < p.cfg.m; ++i) {
    double row_sq = 0.0;
    auto wi = p.w.row(i);
    auto gi = g.row(i);
    for (std::size_t j = 0; j < p.cfg.d; ++j) {
      const double gij = r * gi[j];
      row_sq += gij * gij;
      wi[j] -= eta * gij;
      if (!std::isfinite(wi[j])) info.finite = false;
    }
    worst = std::max(worst, row_sq);
  }
  info.max_row_grad_norm = std::sqrt(worst);
  return info;
}

struct BlowupViolation {
  std::string reason;
};

// boundedness check on the weights and the sampled psi value
inline std::optional<BlowupViolation> blowup_check(const ModelParams& p,
                                                   double psi_sample,
                                                   const TrainConfig& cfg) {
  if (!p.w.all_finite())
    return BlowupViolation{"non-finite weight entry"};
  const double wmax = matrix_norm(p.w, MatrixNorm::two_inf);
  if (wmax > cfg.blowup_w_max)
    return BlowupViolation{"max row norm " + std::to_string(wmax) +
                           " exceeds " + std::to_string(cfg.blowup_w_max)};
  if (!std::isfinite(psi_sample) ||
      std::abs(psi_sample) > cfg.blowup_psi_max)
    return BlowupViolation{"|psi| " + std::to_string(psi_sample) +
                           " exceeds " + std::to_string(cfg.blowup_psi_max)};
  return std::nullopt;
}

// Running averages of a checkpointed series, treating the value as
// piecewise-constant between stamps. With stride one this reproduces
// (1/T') sum_{t<T'} L_t exactly.
inline std::vector<double> average_losses(
    const std::vector<std::size_t>& stamps, const std::vector<double>& values) {
  if (stamps.empty() || stamps.size() != values.size())
    throw std::invalid_argument("average_losses: empty or mismatched series");
  if (stamps[0] != 0)
    throw std::invalid_argument("average_losses: series must start at t = 0");
  for (std::size_t i = 1; i < stamps.size(); ++i)
    if (stamps[i] <= stamps[i - 1])
      throw std::invalid_argument("average_losses: stamps must increase");
  std::vector<double> avg(values.size());
  double carried = 0.0;  // sum of L_t for t < current stamp
  for (std::size_t i = 0; i < stamps.size(); ++i) {
    avg[i] = (carried + values[i]) / double(stamps[i] + 1);
    if (i + 1 < stamps.size())
      carried += values[i] * double(stamps[i + 1] - stamps[i]);
  }
  return avg;
}

namespace detail {

struct GapProbe {
  Points points;
  std::vector<double> labels;
};

inline double gap_psi_g(const ModelParams& p, const GapProbe& probe) {
  double worst = 0.0;
  for (std::size_t i = 0; i < probe.points.count; ++i) {
    const auto x = probe.points[i];
    worst = std::max(worst, std::abs(eval_psi(p, x) - eval_pseudo_g(p, x)));
  }
  return worst;
}

inline double gap_loss_grad(const ModelParams& p, const GapProbe& probe) {
  double worst = 0.0;
  for (std::size_t i = 0; i < probe.points.count; ++i) {
    const auto x = probe.points[i];
    const Matrix gp = loss_grad_w(p, x, probe.labels[i]);
    const Matrix gg = loss_grad_pseudo_g_w(p, x, probe.labels[i]);
    double acc = 0.0;
    for (std::size_t r = 0; r < gp.rows(); ++r) {
      double row_sq = 0.0;
      for (std::size_t c = 0; c < gp.cols(); ++c) {
        const double dij = gp(r, c) - gg(r, c);
        row_sq += dij * dij;
      }
      acc += std::sqrt(row_sq);  // (2,1)-norm of the difference
    }
    worst = std::max(worst, acc);
  }
  return worst;
}

}  // namespace detail

// Full training run: init, T steps, checkpoint every eval_every steps
// plus t = 0 and t = T. Blow-up aborts with a partial report.
inline TrainReport run_training(const TrainConfig& tcfg, const ModelConfig& mcfg,
                                const Dataset& data, const TargetFunction& f) {
  tcfg.validate();
  mcfg.validate();
  if (data.size() == 0) throw std::invalid_argument("run_training: empty dataset");
  const auto t_start = std::chrono::steady_clock::now();

  RngStream init_rng(mcfg.seed, "init");
  RngStream sgd_rng(tcfg.seed, "sgd");
  RngStream test_rng(tcfg.seed, "test");

  TrainReport rep;
  rep.seed = tcfg.seed;
  ModelParams p = init_params(mcfg, init_rng);
  const double eta = tcfg.resolve_eta(mcfg.m);
  rep.eta = eta;

  // fixed test set, reused by every checkpoint of this run
  Points test_pts = sample_unit_ball(test_rng, mcfg.d, tcfg.n_test);
  std::vector<double> test_labels(tcfg.n_test);
  for (std::size_t i = 0; i < tcfg.n_test; ++i)
    test_labels[i] = f(test_pts[i]);

  detail::GapProbe probe;
  if (tcfg.monitor_gaps) {
    RngStream probe_rng(tcfg.seed, "probe");
    probe.points = sample_unit_ball(probe_rng, mcfg.d, tcfg.probe_points);
    probe.labels.resize(tcfg.probe_points);
    for (std::size_t i = 0; i < tcfg.probe_points; ++i)
      probe.labels[i] = f(probe.points[i]);
  }

  double envelope = 0.0;  // eta * running sum of max row gradient norms
  double last_psi_sample = 0.0;
  double carried_expected = 0.0;
  std::size_t checkpoint_count = 0;

  const auto checkpoint = [&](std::size_t iter) {
    CheckpointRecord rec;
    rec.iter = iter;
    rec.train_loss = empirical_loss(p, data);
    const bool fresh_expected = checkpoint_count % tcfg.expected_stride == 0 ||
                                iter == tcfg.T;
    if (fresh_expected)
      carried_expected = expected_loss(p, test_pts, test_labels);
    rec.expected_loss = carried_expected;
    rec.max_drift = max_row_distance(p.w, p.w0);
    rec.drift_envelope = envelope;
    if (tcfg.monitor_gaps) {
      rec.psi_g_gap = detail::gap_psi_g(p, probe);
      rec.grad_gap = detail::gap_loss_grad(p, probe);
    }
    rep.records.push_back(rec);
    ++checkpoint_count;
  };

  const auto is_checkpoint = [&](std::size_t t) {
    if (t == tcfg.T) return true;
    if (tcfg.dense_until > 0 && t <= tcfg.dense_until)
      return t % tcfg.dense_every == 0;
    return t % tcfg.eval_every == 0;
  };

  checkpoint(0);
  Matrix scratch(mcfg.m, mcfg.d);
  for (std::size_t t = 1; t <= tcfg.T; ++t) {
    StepInfo info;
    try {
      info = sgd_step(p, data, sgd_rng, eta, &scratch);
    } catch (const blowup_error& e) {
      rep.blowup = BlowupInfo{t, e.what()};
      break;
    }
    envelope += eta * info.max_row_grad_norm;
    last_psi_sample = info.psi_at_sample;
    if (!info.finite) {
      rep.blowup = BlowupInfo{t, "non-finite weight update"};
      break;
    }
    if (is_checkpoint(t)) {
      if (auto viol = blowup_check(p, last_psi_sample, tcfg)) {
        rep.blowup = BlowupInfo{t, viol->reason};
        break;
      }
      try {
        checkpoint(t);
      } catch (const blowup_error& e) {
        rep.blowup = BlowupInfo{t, e.what()};
        break;
      }
    }
  }

  // running averages over the recorded series
  std::vector<std::size_t> stamps(rep.records.size());
  std::vector<double> train(rep.records.size()), expect(rep.records.size());
  for (std::size_t i = 0; i < rep.records.size(); ++i) {
    stamps[i] = rep.records[i].iter;
    train[i] = rep.records[i].train_loss;
    expect[i] = rep.records[i].expected_loss;
  }
  const auto avg_train = average_losses(stamps, train);
  const auto avg_expect = average_losses(stamps, expect);
  for (std::size_t i = 0; i < rep.records.size(); ++i) {
    rep.records[i].avg_train_loss = avg_train[i];
    rep.records[i].avg_expected_loss = avg_expect[i];
  }

  rep.final_params = std::move(p);
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return rep;
}

}  // namespace pinnball
