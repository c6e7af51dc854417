#pragma once

// Experiment orchestration shared by the CLI and the test suites:
// the (m, N) loss grid with its table and figure emitters, and the
// verification suite bundling the theory checks.

#include <atomic>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pinnball/approx.hpp"
#include "pinnball/config.hpp"
#include "pinnball/io.hpp"
#include "pinnball/monitors.hpp"
#include "pinnball/rademacher.hpp"
#include "pinnball/stats.hpp"
#include "pinnball/svg.hpp"
#include "pinnball/theory.hpp"
#include "pinnball/train.hpp"

namespace pinnball {

// 99% two-sided normal margin for an empirical fraction
inline double binom99_margin(double p, std::size_t trials) {
  return 2.576 * std::sqrt(p * (1.0 - p) / double(trials));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t idx) {
  return detail::mix64(detail::mix64(base + detail::kGolden) ^
                       detail::mix64(idx + 1));
}

// ---- loss grid (table and figure reproduction) ---------------------------

struct GridOptions {
  std::vector<std::size_t> m_grid = {100, 1000, 10000};
  std::vector<std::size_t> n_grid = {100, 1000, 10000};
  std::size_t d = 3;
  double alpha = 0.0;
  double beta = 0.5;
  std::string target_kind = "norm_sq";
  std::string target_spec;
  std::size_t T = 1'000'000;
  double eta = 0.0;  // 0 -> eta_scale/m
  double eta_scale = 1.0;
  std::size_t eval_every = 1'000;
  std::size_t n_test = 100'000;
  std::uint64_t seed = 1;
  double scale = 1.0;  // shrinks T and n_test, caps m at 1000
  std::size_t jobs = 1;

  std::size_t effective_T() const {
    return std::max<std::size_t>(1, std::size_t(std::llround(double(T) * scale)));
  }
  std::size_t effective_m(std::size_t m) const {
    return scale < 1.0 ? std::min<std::size_t>(m, 1000) : m;
  }
  std::size_t effective_n_test() const {
    if (scale >= 1.0) return n_test;
    return std::max<std::size_t>(
        10'000, std::size_t(std::llround(double(n_test) * scale)));
  }
};

struct GridCell {
  std::size_t m_requested = 0;
  std::size_t m = 0;  // effective width
  std::size_t n = 0;
  std::uint64_t seed = 0;
  TrainReport report;
};

struct GridResult {
  GridOptions options;
  std::vector<GridCell> cells;  // n-major: index = ni * m_grid.size() + mi

  const GridCell& cell(std::size_t ni, std::size_t mi) const {
    return cells[ni * options.m_grid.size() + mi];
  }
};

inline GridResult run_loss_grid(const GridOptions& opt,
                                std::ostream* progress = nullptr) {
  GridResult result;
  result.options = opt;
  result.cells.resize(opt.m_grid.size() * opt.n_grid.size());

  const auto run_cell = [&](std::size_t idx) {
    const std::size_t ni = idx / opt.m_grid.size();
    const std::size_t mi = idx % opt.m_grid.size();
    GridCell cell;
    cell.m_requested = opt.m_grid[mi];
    cell.m = opt.effective_m(cell.m_requested);
    cell.n = opt.n_grid[ni];
    cell.seed = derive_seed(opt.seed, idx);

    const TargetFunction f = make_target(opt.target_kind, opt.target_spec, opt.d);
    RngStream data_rng(cell.seed, "data");
    const Dataset data = build_dataset(f, cell.n, opt.d, data_rng);

    ModelConfig mcfg;
    mcfg.d = opt.d;
    mcfg.m = cell.m;
    mcfg.alpha = opt.alpha;
    mcfg.beta = opt.beta;
    mcfg.seed = cell.seed;

    TrainConfig tcfg;
    tcfg.eta = opt.eta;
    tcfg.eta_scale = opt.eta_scale;
    tcfg.T = opt.effective_T();
    tcfg.eval_every = std::min(opt.eval_every, tcfg.T);
    tcfg.n_test = opt.effective_n_test();
    tcfg.seed = cell.seed;

    cell.report = run_training(tcfg, mcfg, data, f);
    result.cells[idx] = std::move(cell);
    if (progress)
      (*progress) << "cell m=" << result.cells[idx].m
                  << " N=" << result.cells[idx].n << " avg_train="
                  << fmt6(result.cells[idx].report.final_record().avg_train_loss)
                  << (result.cells[idx].report.blew_up() ? " [blow-up]" : "")
                  << "\n";
  };

  const std::size_t total = result.cells.size();
  const std::size_t workers = std::max<std::size_t>(1, std::min(opt.jobs, total));
  if (workers == 1) {
    for (std::size_t i = 0; i < total; ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= total) return;
          run_cell(i);
        }
      });
    for (auto& t : pool) t.join();
  }
  return result;
}

// table CSVs plus per-cell loss curves and summaries; timings are
// omitted so rerunning with the same seed reproduces every byte
inline void emit_table1(const GridResult& res,
                        const std::filesystem::path& dir) {
  const auto& opt = res.options;
  {
    std::ostringstream out;
    out << "# pinnball-csv v1: table1_long\n";
    out << "N,m,final_avg_train_loss,final_avg_expected_loss,blowup\n";
    for (std::size_t ni = 0; ni < opt.n_grid.size(); ++ni)
      for (std::size_t mi = 0; mi < opt.m_grid.size(); ++mi) {
        const auto& c = res.cell(ni, mi);
        const auto& last = c.report.final_record();
        out << c.n << "," << c.m << "," << fmt17(last.avg_train_loss) << ","
            << fmt17(last.avg_expected_loss) << ","
            << (c.report.blew_up() ? 1 : 0) << "\n";
      }
    atomic_write_file(dir / "table1.csv", out.str());
  }
  {
    std::ostringstream out;
    out << "# pinnball-csv v1: table1_pivot (avg train loss / avg expected "
           "loss)\n";
    out << "N";
    for (std::size_t mi = 0; mi < opt.m_grid.size(); ++mi)
      out << ",m=" << res.cell(0, mi).m;
    out << "\n";
    for (std::size_t ni = 0; ni < opt.n_grid.size(); ++ni) {
      out << res.cell(ni, 0).n;
      for (std::size_t mi = 0; mi < opt.m_grid.size(); ++mi) {
        const auto& last = res.cell(ni, mi).report.final_record();
        out << "," << fmt6(last.avg_train_loss) << " / "
            << fmt6(last.avg_expected_loss);
      }
      out << "\n";
    }
    atomic_write_file(dir / "table1_pivot.csv", out.str());
  }
  for (const auto& c : res.cells) {
    const std::string stem =
        "cell_m" + std::to_string(c.m) + "_N" + std::to_string(c.n);
    atomic_write_file(dir / (stem + "_curve.csv"), loss_curve_csv(c.report));
    ModelConfig mcfg;
    mcfg.d = opt.d;
    mcfg.m = c.m;
    mcfg.alpha = opt.alpha;
    mcfg.beta = opt.beta;
    mcfg.seed = c.seed;
    TrainConfig tcfg;
    tcfg.T = opt.effective_T();
    tcfg.eval_every = std::min(opt.eval_every, tcfg.T);
    tcfg.n_test = opt.effective_n_test();
    tcfg.seed = c.seed;
    const auto j = summary_json(c.report, mcfg, tcfg, /*with_timings=*/false);
    atomic_write_file(dir / (stem + "_summary.json"), j.dump(2) + "\n");
  }
}

// one plot per N: average training loss curves for each m
inline void emit_fig1(const GridResult& res, const std::filesystem::path& dir) {
  const auto& opt = res.options;
  for (std::size_t ni = 0; ni < opt.n_grid.size(); ++ni) {
    std::vector<PlotSeries> series;
    std::ostringstream csv;
    csv << "# pinnball-csv v1: fig1 (avg train loss per m)\n";
    csv << "iter";
    for (std::size_t mi = 0; mi < opt.m_grid.size(); ++mi)
      csv << ",m=" << res.cell(ni, mi).m;
    csv << "\n";
    for (std::size_t mi = 0; mi < opt.m_grid.size(); ++mi) {
      const auto& c = res.cell(ni, mi);
      PlotSeries s;
      s.name = "m=" + std::to_string(c.m);
      for (const auto& r : c.report.records)
        s.xy.emplace_back(double(r.iter), r.avg_train_loss);
      series.push_back(std::move(s));
    }
    const std::size_t rows = series.front().xy.size();
    for (std::size_t r = 0; r < rows; ++r) {
      csv << std::size_t(series.front().xy[r].first);
      for (const auto& s : series)
        csv << "," << (r < s.xy.size() ? fmt17(s.xy[r].second) : std::string());
      csv << "\n";
    }
    const std::size_t n = res.cell(ni, 0).n;
    const std::string stem = "fig1_N" + std::to_string(n);
    atomic_write_file(dir / (stem + ".csv"), csv.str());
    atomic_write_file(
        dir / (stem + ".svg"),
        svg_line_plot("average training loss, N = " + std::to_string(n),
                      "iteration", "avg train loss", series));
  }
}

// ---- verification suite ---------------------------------------------------

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string details;
};

struct VerifyOptions {
  double scale = 1.0;
  std::uint64_t seed = 7;
};

// threshold calculators: hypothesis errors and the closed-form
// monotonicities on a parameter grid
inline CheckResult check_thresholds() {
  CheckResult res{"thresholds", true, ""};
  std::ostringstream note;
  try {
    const double pairs[5][2] = {
        {0.0, 0.5}, {0.25, 0.5}, {0.0, 1.0}, {1.0, 0.25}, {0.5, 0.4}};
    const double eps_grid[5] = {0.02, 0.05, 0.1, 0.5, 1.0};
    for (const auto& ab : pairs) {
      ThresholdInputs in;
      in.alpha = ab[0];
      in.beta = ab[1];
      in.delta = 0.1;
      in.f_norm = 1.5;
      in.d = 3;
      double prev_m = std::numeric_limits<double>::infinity();
      for (double eps : eps_grid) {
        in.epsilon = eps;
        const double M = width_threshold_M(in);
        if (M > prev_m + 1e-9 * prev_m) {
          res.pass = false;
          note << "M not non-increasing in eps at (" << ab[0] << "," << ab[1]
               << "); ";
        }
        prev_m = M;
        double prev_t0 = 0.0;
        for (double m : {64.0, 128.0, 256.0, 512.0, 1024.0}) {
          const double t0 = iteration_cap_T0(m, in);
          if (ab[0] == 0.0 && ab[1] == 0.5 && m >= 2.0 && t0 < prev_t0) {
            res.pass = false;
            note << "T0 not non-decreasing in m; ";
          }
          prev_t0 = t0;
        }
        double prev_n0 = 0.0;
        for (double T : {1e2, 1e3, 1e4, 1e5}) {
          const double n0 = sample_threshold_N0(256.0, 1.0 / 256.0, T, in);
          if (n0 + 1e-12 < prev_n0) {
            res.pass = false;
            note << "N0 not non-decreasing in T; ";
          }
          prev_n0 = n0;
        }
      }
    }
    // hypothesis violation must be rejected with the name of the bound
    try {
      ThresholdInputs bad;
      bad.alpha = 0.0;
      bad.beta = 0.2;  // alpha + 3 beta = 0.6 < 1
      width_threshold_M(bad);
      res.pass = false;
      note << "hypothesis violation not rejected; ";
    } catch (const std::invalid_argument&) {
    }
  } catch (const std::exception& e) {
    res.pass = false;
    note << "exception: " << e.what();
  }
  res.details = note.str().empty() ? "monotonicity and hypothesis checks hold"
                                   : note.str();
  return res;
}

struct TrajectoryCheckOutcome {
  CheckResult check;
  TrainReport report;
};

// short run with gap monitoring: one-step drift envelope and the
// growth exponent of the psi-vs-g gap
inline TrajectoryCheckOutcome check_trajectory(const VerifyOptions& vopt) {
  TrajectoryCheckOutcome out;
  out.check.name = "trajectory_monitors";
  const std::size_t T =
      std::max<std::size_t>(2'000, std::size_t(10'000 * vopt.scale));

  ModelConfig mcfg;
  mcfg.d = 3;
  mcfg.m = 256;
  mcfg.alpha = 0.0;
  mcfg.beta = 0.5;
  mcfg.seed = vopt.seed;
  TrainConfig tcfg;
  tcfg.eta = 1.0 / double(mcfg.m);
  tcfg.T = T;
  tcfg.eval_every = std::max<std::size_t>(1, T / 40);
  tcfg.n_test = 4'096;
  tcfg.seed = vopt.seed;
  tcfg.monitor_gaps = true;

  const TargetFunction f = make_norm_sq_target(mcfg.d);
  RngStream data_rng(vopt.seed, "data");
  const Dataset data = build_dataset(f, 256, mcfg.d, data_rng);
  out.report = run_training(tcfg, mcfg, data, f);

  std::ostringstream note;
  bool pass = !out.report.blew_up();
  if (!pass) note << "run blew up; ";
  double worst_excess = 0.0;
  for (const auto& r : out.report.records) {
    const double slack = 1e-12 + 1e-9 * r.drift_envelope;
    if (r.max_drift > r.drift_envelope + slack) {
      pass = false;
      worst_excess = std::max(worst_excess, r.max_drift - r.drift_envelope);
    }
  }
  if (worst_excess > 0.0)
    note << "drift exceeds envelope by " << fmt6(worst_excess) << "; ";

  std::vector<double> ts, gaps;
  for (const auto& r : out.report.records)
    if (r.iter > 0 && r.psi_g_gap > 0.0) {
      ts.push_back(double(r.iter));
      gaps.push_back(r.psi_g_gap);
    }
  double slope = 0.0;
  if (ts.size() >= 3) {
    slope = fit_loglog_slope(ts, gaps);
    if (slope > 3.3) {
      pass = false;
      note << "gap growth exponent " << fmt6(slope) << " > 3.3; ";
    }
  } else {
    pass = false;
    note << "too few positive gap records; ";
  }
  note << "envelope holds at " << out.report.records.size()
       << " checkpoints, gap exponent " << fmt6(slope);
  out.check.pass = pass;
  out.check.details = note.str();
  return out;
}

struct ApproxCheckOutcome {
  CheckResult check;
  ApproxResult result_d1;
  ApproxResult result_d3;
  std::size_t trials = 0;
  double delta = 0.1;
};

inline ApproxCheckOutcome check_fm_approx(const VerifyOptions& vopt,
                                          double margin = 0.03) {
  ApproxCheckOutcome out;
  out.check.name = "fm_approximation";
  ApproxOptions aopt;
  aopt.trials = std::max<std::size_t>(100, std::size_t(500 * vopt.scale));
  aopt.delta = 0.1;
  aopt.seed = vopt.seed;
  out.trials = aopt.trials;
  out.delta = aopt.delta;

  std::ostringstream note;
  bool pass = true;
  for (std::size_t d : {std::size_t(1), std::size_t(3)}) {
    ModelConfig cfg;
    cfg.d = d;
    cfg.m = 64;
    cfg.alpha = 0.0;
    cfg.beta = 0.5;
    std::vector<double> coeffs(d, 1.0 / std::sqrt(double(d)));
    const auto target = RepresentedTarget::constant_field(cfg, coeffs);
    const auto res = fm_approx_experiment(target, {64, 256, 1024}, aopt);
    for (const auto& cell : res.cells) {
      if (cell.fail_fraction > aopt.delta + margin) {
        pass = false;
        note << "d=" << d << " m=" << cell.m << " fail fraction "
             << fmt6(cell.fail_fraction) << " > " << fmt6(aopt.delta + margin)
             << "; ";
      }
    }
    if (res.decoupled_slope < -0.6 || res.decoupled_slope > -0.4) {
      pass = false;
      note << "d=" << d << " decoupled slope " << fmt6(res.decoupled_slope)
           << " outside [-0.6,-0.4]; ";
    }
    note << "d=" << d << " slope " << fmt6(res.decoupled_slope) << " worst fail "
         << fmt6([&] {
              double w = 0.0;
              for (const auto& c : res.cells) w = std::max(w, c.fail_fraction);
              return w;
            }())
         << "; ";
    (d == 1 ? out.result_d1 : out.result_d3) = res;
  }
  out.check.pass = pass;
  out.check.details = note.str();
  return out;
}

struct ConcentrationCheckOutcome {
  CheckResult check;
  std::vector<std::pair<double, ConcentrationResult>> by_delta;
  std::size_t trials = 0;
};

inline ConcentrationCheckOutcome check_concentration(const VerifyOptions& vopt) {
  ConcentrationCheckOutcome out;
  out.check = {"concentration", true, ""};
  std::ostringstream note;
  out.trials = std::max<std::size_t>(1000, std::size_t(5000 * vopt.scale));
  for (double delta : {0.05, 0.2}) {
    const auto r = concentration_test(2.0, 3, 400, delta, out.trials, vopt.seed);
    const double lim = delta + binom99_margin(delta, out.trials);
    note << "delta=" << delta << " fail=" << fmt6(r.fail_fraction)
         << " limit=" << fmt6(lim) << "; ";
    if (r.fail_fraction > lim) out.check.pass = false;
    out.by_delta.emplace_back(delta, r);
  }
  out.check.details = note.str();
  return out;
}

struct RademacherCheckOutcome {
  CheckResult check;
  std::size_t n_small = 256, n_large = 1024, draws = 0;
  RademacherResult small, large, zero;
  double ratio = 0.0;
  double zero_limit = 0.0;
};

inline RademacherCheckOutcome check_rademacher(const VerifyOptions& vopt) {
  RademacherCheckOutcome out;
  out.check = {"rademacher_scaling", true, ""};
  std::ostringstream note;
  out.draws = std::max<std::size_t>(50, std::size_t(200 * vopt.scale));
  const double tau = 0.05;

  ModelConfig mcfg;
  mcfg.d = 3;
  mcfg.m = 256;
  mcfg.alpha = 0.0;
  mcfg.beta = 0.5;
  mcfg.seed = vopt.seed;
  RngStream init(vopt.seed, "init");
  const ModelParams p = init_params(mcfg, init);

  AscentOptions ascent;
  ascent.restarts = 3;
  ascent.steps = 40;
  ascent.step_size = tau / 5.0;

  RngStream pts_rng(vopt.seed, "rademacher-points");
  const Points x_small = sample_unit_ball(pts_rng, mcfg.d, out.n_small);
  const Points x_large = sample_unit_ball(pts_rng, mcfg.d, out.n_large);

  out.small = rademacher_estimate(p, x_small, tau, out.draws, ascent, vopt.seed);
  out.large =
      rademacher_estimate(p, x_large, tau, out.draws, ascent, vopt.seed + 1);
  out.ratio = out.small.estimate / out.large.estimate;
  note << "est(N)=" << fmt6(out.small.estimate) << " est(4N)="
       << fmt6(out.large.estimate) << " ratio=" << fmt6(out.ratio)
       << " kappa=" << fmt6(out.small.kappa) << "; ";
  if (!(out.ratio >= 1.4 && out.ratio <= 2.9)) {
    out.check.pass = false;
    note << "ratio outside [1.4,2.9]; ";
  }

  out.zero = rademacher_estimate(p, x_small, 0.0, out.draws, ascent, vopt.seed + 2);
  out.zero_limit = 3.0 / std::sqrt(double(out.draws) * double(out.n_small));
  note << "tau'=0 estimate " << fmt6(out.zero.estimate) << " limit "
       << fmt6(out.zero_limit);
  if (std::abs(out.zero.estimate) > out.zero_limit) {
    out.check.pass = false;
    note << "; tau'=0 estimate too large";
  }
  out.check.details = note.str();
  return out;
}

struct VerifySuiteOutcome {
  std::vector<CheckResult> checks;
  TrajectoryCheckOutcome trajectory;
  ApproxCheckOutcome approx;
  ConcentrationCheckOutcome concentration;
  RademacherCheckOutcome rademacher;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

inline VerifySuiteOutcome run_verify_suite(const VerifyOptions& vopt,
                                           std::ostream* progress) {
  VerifySuiteOutcome out;
  const auto log = [&](const CheckResult& c) {
    if (progress)
      (*progress) << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": "
                  << c.details << "\n";
    out.checks.push_back(c);
  };
  log(check_thresholds());
  out.trajectory = check_trajectory(vopt);
  log(out.trajectory.check);
  out.approx = check_fm_approx(vopt);
  log(out.approx.check);
  out.concentration = check_concentration(vopt);
  log(out.concentration.check);
  out.rademacher = check_rademacher(vopt);
  log(out.rademacher.check);
  return out;
}

inline std::string approx_cells_csv(const ApproxResult& res, double delta,
                                    std::size_t trials) {
  std::ostringstream csv;
  const double margin = binom99_margin(delta, trials);
  csv << "# pinnball-csv v1: approx (L2 error vs high-probability bound)\n";
  csv << "m,mean_err,max_err,bound,fail_fraction,pass\n";
  for (const auto& c : res.cells)
    csv << c.m << "," << fmt17(c.mean_err) << "," << fmt17(c.max_err) << ","
        << fmt17(c.bound) << "," << fmt17(c.fail_fraction) << ","
        << (c.fail_fraction <= delta + margin ? 1 : 0) << "\n";
  return csv.str();
}

inline std::string approx_decoupled_csv(const ApproxResult& res) {
  std::ostringstream csv;
  csv << "# pinnball-csv v1: approx_decoupled (error vs basis count)\n";
  csv << "k,mean_err\n";
  for (std::size_t i = 0; i < res.decoupled_k.size(); ++i)
    csv << res.decoupled_k[i] << "," << fmt17(res.decoupled_err[i]) << "\n";
  return csv.str();
}

// verdict JSON plus one detail CSV per experiment
inline void emit_verify(const VerifySuiteOutcome& outcome,
                        const std::filesystem::path& dir) {
  nlohmann::json j;
  j["schema"] = "pinnball-verify-v1";
  for (const auto& c : outcome.checks)
    j["checks"][c.name] = {{"pass", c.pass}, {"details", c.details}};
  j["all_pass"] = outcome.all_pass();
  j["approx"] = {{"decoupled_slope_d1", outcome.approx.result_d1.decoupled_slope},
                 {"decoupled_slope_d3", outcome.approx.result_d3.decoupled_slope}};
  j["rademacher"] = {{"ratio", outcome.rademacher.ratio},
                     {"kappa", outcome.rademacher.small.kappa},
                     {"zero_estimate", outcome.rademacher.zero.estimate},
                     {"zero_limit", outcome.rademacher.zero_limit}};
  atomic_write_file(dir / "verify.json", j.dump(2) + "\n");

  std::ostringstream csv;
  csv << "# pinnball-csv v1: verify\n";
  csv << "check,pass\n";
  for (const auto& c : outcome.checks)
    csv << c.name << "," << (c.pass ? 1 : 0) << "\n";
  atomic_write_file(dir / "verify.csv", csv.str());

  atomic_write_file(dir / "trajectory_monitors.csv",
                    monitor_csv(outcome.trajectory.report));
  atomic_write_file(dir / "approx_d1.csv",
                    approx_cells_csv(outcome.approx.result_d1,
                                     outcome.approx.delta,
                                     outcome.approx.trials));
  atomic_write_file(dir / "approx_d3.csv",
                    approx_cells_csv(outcome.approx.result_d3,
                                     outcome.approx.delta,
                                     outcome.approx.trials));
  atomic_write_file(dir / "approx_decoupled_d1.csv",
                    approx_decoupled_csv(outcome.approx.result_d1));
  atomic_write_file(dir / "approx_decoupled_d3.csv",
                    approx_decoupled_csv(outcome.approx.result_d3));

  {
    std::ostringstream c;
    c << "# pinnball-csv v1: concentration\n";
    c << "delta,fail_fraction,limit,bound,err_median,err_q90,pass\n";
    for (const auto& [delta, r] : outcome.concentration.by_delta) {
      const double lim =
          delta + binom99_margin(delta, outcome.concentration.trials);
      c << delta << "," << fmt17(r.fail_fraction) << "," << fmt17(lim) << ","
        << fmt17(r.bound) << "," << fmt17(r.err_median) << ","
        << fmt17(r.err_q90) << "," << (r.fail_fraction <= lim ? 1 : 0) << "\n";
    }
    atomic_write_file(dir / "concentration.csv", c.str());
  }
  {
    const auto& r = outcome.rademacher;
    std::ostringstream c;
    c << "# pinnball-csv v1: rademacher\n";
    c << "n_points,tau_prime,estimate,std_error,kappa\n";
    c << r.n_small << ",0.05," << fmt17(r.small.estimate) << ","
      << fmt17(r.small.std_error) << "," << fmt17(r.small.kappa) << "\n";
    c << r.n_large << ",0.05," << fmt17(r.large.estimate) << ","
      << fmt17(r.large.std_error) << "," << fmt17(r.large.kappa) << "\n";
    c << r.n_small << ",0," << fmt17(r.zero.estimate) << ","
      << fmt17(r.zero.std_error) << ",0\n";
    atomic_write_file(dir / "rademacher.csv", c.str());
  }
}

}  // namespace pinnball
