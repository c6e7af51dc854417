// pinnball command-line driver: single training runs, the (m, N) loss
// grid with table and figure outputs, the verification suite, and the
// approximation-rate experiment.
//
// Exit codes: 0 success / all checks pass, 1 configuration error,
// 2 verification failure, 3 blow-up during training.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pinnball/pinnball.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerify = 2;
constexpr int kExitBlowup = 3;

struct CommonArgs {
  std::optional<std::uint64_t> seed;
  std::string out_dir;  // empty: fall back to config value, then "out"
  double scale = 1.0;

  std::string resolve_out(const std::string& config_dir) const {
    if (!out_dir.empty()) return out_dir;
    return config_dir.empty() ? "out" : config_dir;
  }
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--seed", args.seed, "base seed");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--scale", args.scale,
                  "desk-scale multiplier: shrinks T and the test-set size, "
                  "caps m at 1000")
      ->check(CLI::PositiveNumber);
}

pinnball::RunConfig load_config(const std::string& path, int& exit_code) {
  pinnball::RunConfig cfg;
  exit_code = kExitOk;
  if (path.empty()) return cfg;
  std::string text;
  try {
    text = pinnball::read_file(path);
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    exit_code = kExitConfig;
    return cfg;
  }
  auto parsed = pinnball::parse_config(text);
  if (!parsed.ok()) {
    for (const auto& v : parsed.violations) std::cerr << "config: " << v << "\n";
    exit_code = kExitConfig;
    return cfg;
  }
  return parsed.config;
}

int cmd_train(const std::string& config_path, const CommonArgs& common) {
  int rc = kExitOk;
  pinnball::RunConfig cfg = load_config(config_path, rc);
  if (rc != kExitOk) return rc;
  if (common.seed) {
    cfg.seed = *common.seed;
    cfg.data_seed = pinnball::derive_seed(*common.seed, 1);
  }
  cfg.out_dir = common.resolve_out(cfg.out_dir);

  const std::size_t m = cfg.m();
  pinnball::ModelConfig mcfg = cfg.model_config(m, cfg.seed);
  pinnball::TrainConfig tcfg = cfg.train_config(cfg.seed);
  if (common.scale < 1.0) {
    tcfg.T = std::max<std::size_t>(
        1, std::size_t(std::llround(double(tcfg.T) * common.scale)));
    tcfg.n_test = std::max<std::size_t>(
        10'000, std::size_t(std::llround(double(tcfg.n_test) * common.scale)));
  }
  tcfg.eval_every = std::min(tcfg.eval_every, std::max<std::size_t>(1, tcfg.T));

  pinnball::TargetFunction f;
  try {
    f = pinnball::make_target(cfg.target_kind, cfg.target_spec, cfg.d);
    mcfg.validate();
    tcfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kExitConfig;
  }

  pinnball::RngStream data_rng(cfg.data_seed, "data");
  const pinnball::Dataset data = pinnball::build_dataset(f, cfg.n(), cfg.d, data_rng);
  const pinnball::TrainReport rep = pinnball::run_training(tcfg, mcfg, data, f);

  const std::filesystem::path dir = cfg.out_dir;
  pinnball::atomic_write_file(dir / "curve.csv", pinnball::loss_curve_csv(rep));
  if (tcfg.monitor_gaps)
    pinnball::atomic_write_file(dir / "monitors.csv", pinnball::monitor_csv(rep));
  pinnball::atomic_write_file(
      dir / "summary.json",
      pinnball::summary_json(rep, mcfg, tcfg).dump(2) + "\n");
  {
    std::vector<pinnball::PlotSeries> series(2);
    series[0].name = "avg train loss";
    series[1].name = "avg expected loss";
    for (const auto& r : rep.records) {
      series[0].xy.emplace_back(double(r.iter), r.avg_train_loss);
      series[1].xy.emplace_back(double(r.iter), r.avg_expected_loss);
    }
    pinnball::atomic_write_file(
        dir / "curve.svg",
        pinnball::svg_line_plot("training run, m = " + std::to_string(m) +
                                    ", N = " + std::to_string(cfg.n()),
                                "iteration", "loss", series));
  }

  const auto& last = rep.final_record();
  std::cout << "final iter " << last.iter << ": avg train loss "
            << pinnball::fmt6(last.avg_train_loss) << ", avg expected loss "
            << pinnball::fmt6(last.avg_expected_loss) << "\n";
  if (rep.blew_up()) {
    std::cerr << "blow-up at iteration " << rep.blowup->iter << ": "
              << rep.blowup->reason << "\n";
    return kExitBlowup;
  }
  return kExitOk;
}

int cmd_grid(const std::string& config_path, const CommonArgs& common,
             std::size_t jobs, bool figure) {
  int rc = kExitOk;
  pinnball::RunConfig cfg = load_config(config_path, rc);
  if (rc != kExitOk) return rc;
  if (config_path.empty()) cfg.preset = "table1";
  if (cfg.preset == "table1") {
    auto expanded = pinnball::parse_config("preset = table1");
    auto kept_seed = cfg.seed;
    cfg = expanded.config;
    cfg.seed = kept_seed;
  }
  if (common.seed) cfg.seed = *common.seed;

  pinnball::GridOptions opt;
  opt.m_grid = cfg.m_grid;
  opt.n_grid = cfg.n_grid;
  opt.d = cfg.d;
  opt.alpha = cfg.alpha;
  opt.beta = cfg.beta;
  opt.target_kind = cfg.target_kind;
  opt.target_spec = cfg.target_spec;
  opt.T = cfg.T;
  opt.eta = cfg.eta;
  opt.eta_scale = cfg.eta_scale;
  opt.eval_every = cfg.eval_every;
  opt.n_test = cfg.n_test;
  opt.seed = cfg.seed;
  opt.scale = common.scale;
  opt.jobs = jobs;

  const pinnball::GridResult res = pinnball::run_loss_grid(opt, &std::cout);
  const std::filesystem::path dir = common.resolve_out(cfg.out_dir);
  if (figure)
    pinnball::emit_fig1(res, dir);
  else
    pinnball::emit_table1(res, dir);

  for (const auto& c : res.cells)
    if (c.report.blew_up()) {
      std::cerr << "blow-up in cell m=" << c.m << " N=" << c.n << "\n";
      return kExitBlowup;
    }
  return kExitOk;
}

int cmd_verify(const CommonArgs& common) {
  pinnball::VerifyOptions vopt;
  vopt.scale = common.scale;
  if (common.seed) vopt.seed = *common.seed;
  const auto outcome = pinnball::run_verify_suite(vopt, &std::cout);
  pinnball::emit_verify(outcome, common.resolve_out(""));
  if (!outcome.all_pass()) return kExitVerify;
  std::cout << "all checks passed\n";
  return kExitOk;
}

int cmd_approx(const CommonArgs& common, std::vector<std::size_t> m_grid,
               std::size_t d, std::size_t trials, double delta) {
  pinnball::ApproxOptions aopt;
  aopt.trials = trials;
  aopt.delta = delta;
  if (common.seed) aopt.seed = *common.seed;
  if (common.scale < 1.0)
    aopt.trials = std::max<std::size_t>(
        100, std::size_t(std::llround(double(trials) * common.scale)));

  pinnball::ModelConfig cfg;
  cfg.d = d;
  cfg.m = m_grid.front();
  cfg.alpha = 0.0;
  cfg.beta = 0.5;
  std::vector<double> coeffs(d, 1.0 / std::sqrt(double(d)));
  const auto target = pinnball::RepresentedTarget::constant_field(cfg, coeffs);

  pinnball::ApproxResult res;
  try {
    res = pinnball::fm_approx_experiment(target, m_grid, aopt);
  } catch (const std::exception& e) {
    std::cerr << "approx: " << e.what() << "\n";
    return kExitConfig;
  }

  bool all_pass = true;
  const double margin = pinnball::binom99_margin(delta, aopt.trials);
  for (const auto& cell : res.cells) {
    const bool pass = cell.fail_fraction <= delta + margin;
    all_pass = all_pass && pass;
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << "m=" << cell.m
              << " fail_fraction=" << pinnball::fmt6(cell.fail_fraction)
              << " (limit " << pinnball::fmt6(delta + margin) << ")\n";
  }
  std::cout << "decoupled slope " << pinnball::fmt6(res.decoupled_slope)
            << " (expect about -0.5)\n";
  const std::filesystem::path dir = common.resolve_out("");
  pinnball::atomic_write_file(
      dir / "approx.csv", pinnball::approx_cells_csv(res, delta, aopt.trials));
  pinnball::atomic_write_file(dir / "approx_decoupled.csv",
                              pinnball::approx_decoupled_csv(res));
  nlohmann::json j;
  j["schema"] = "pinnball-approx-v1";
  j["decoupled_slope"] = res.decoupled_slope;
  j["all_pass"] = all_pass;
  pinnball::atomic_write_file(dir / "approx.json", j.dump(2) + "\n");
  return all_pass ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-layer PINN training and theory checks on the unit ball"};
  app.require_subcommand(1);

  CommonArgs train_args, table_args, fig_args, verify_args, approx_args;
  std::string train_config, table_config, fig_config;
  std::size_t table_jobs = 2, fig_jobs = 2;
  std::vector<std::size_t> approx_m = {64, 256, 1024};
  std::size_t approx_d = 3, approx_trials = 500;
  double approx_delta = 0.1;

  auto* train = app.add_subcommand("train", "single training run");
  train->add_option("--config", train_config, "run configuration file");
  add_common(train, train_args);

  auto* table1 =
      app.add_subcommand("table1", "grid of final average losses over (m, N)");
  table1->add_option("--config", table_config, "run configuration file");
  table1->add_option("--jobs", table_jobs, "parallel grid cells");
  add_common(table1, table_args);

  auto* fig1 = app.add_subcommand("fig1", "loss-curve plots per N");
  fig1->add_option("--config", fig_config, "run configuration file");
  fig1->add_option("--jobs", fig_jobs, "parallel grid cells");
  add_common(fig1, fig_args);

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  add_common(verify, verify_args);

  auto* approx = app.add_subcommand("approx", "approximation-rate experiment");
  approx->add_option("--m-grid", approx_m, "widths to test")->delimiter(',');
  approx->add_option("--d", approx_d, "input dimension");
  approx->add_option("--trials", approx_trials, "constructions per width");
  approx->add_option("--delta", approx_delta, "failure probability")
      ->check(CLI::Range(1e-6, 0.999));
  add_common(approx, approx_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(train_config, train_args);
    if (table1->parsed())
      return cmd_grid(table_config, table_args, table_jobs, false);
    if (fig1->parsed()) return cmd_grid(fig_config, fig_args, fig_jobs, true);
    if (verify->parsed()) return cmd_verify(verify_args);
    if (approx->parsed())
      return cmd_approx(approx_args, approx_m, approx_d, approx_trials,
                        approx_delta);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
