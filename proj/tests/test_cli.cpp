#include <doctest.h>

#include <filesystem>
#include <string>

#include "pinnball/config.hpp"
#include "pinnball/experiments.hpp"
#include "pinnball/io.hpp"
#include "pinnball/svg.hpp"

using namespace pinnball;

TEST_CASE("minimal config fills documented defaults") {
  const auto out = parse_config("[model]\nm = 64\n");
  REQUIRE(out.ok());
  CHECK(out.config.m() == 64);
  CHECK(out.config.d == 3);
  CHECK(out.config.alpha == 0.0);
  CHECK(out.config.beta == 0.5);
  CHECK(out.config.eval_every == 1000);
  CHECK(out.config.n_test == 100'000);
  CHECK(out.config.target_kind == "norm_sq");
}

TEST_CASE("range violation names the key") {
  const auto out = parse_config("[model]\nm = -5\n");
  REQUIRE(!out.ok());
  CHECK(out.violations.size() == 1);
  CHECK(out.violations[0].find("model.m") != std::string::npos);
}

TEST_CASE("unknown keys are rejected and all violations reported") {
  const auto out = parse_config(
      "[model]\nm = -5\nwidth = 3\n[train]\neta = -1\n[bogus]\n");
  REQUIRE(!out.ok());
  CHECK(out.violations.size() == 4);
}

TEST_CASE("table1 preset expands the reproduction grid") {
  const auto out = parse_config("preset = table1\n");
  REQUIRE(out.ok());
  CHECK(out.config.m_grid == std::vector<std::size_t>{100, 1000, 10000});
  CHECK(out.config.n_grid == std::vector<std::size_t>{100, 1000, 10000});
  CHECK(out.config.d == 3);
  CHECK(out.config.alpha == 0.0);
  CHECK(out.config.beta == 0.5);
  CHECK(out.config.T == 1'000'000);
}

TEST_CASE("comments and blank lines are ignored") {
  const auto out =
      parse_config("# comment\n\n[train]\nT = 5000\n; another\neval_every = "
                   "500\n");
  REQUIRE(out.ok());
  CHECK(out.config.T == 5000);
  CHECK(out.config.eval_every == 500);
}

TEST_CASE("eval cadence must fit the horizon") {
  const auto out = parse_config("[train]\nT = 10\neval_every = 100\n");
  REQUIRE(!out.ok());
}

TEST_CASE("atomic file writes leave no temporary behind") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "pinnball_test_io";
  fs::remove_all(dir);
  atomic_write_file(dir / "a.txt", "hello\n");
  CHECK(read_file(dir / "a.txt") == "hello\n");
  CHECK(!fs::exists(dir / "a.txt.tmp"));
  fs::remove_all(dir);
}

TEST_CASE("loss curve CSV carries the versioned schema") {
  TrainReport rep;
  CheckpointRecord r;
  r.iter = 0;
  r.train_loss = 0.5;
  rep.records.push_back(r);
  const std::string csv = loss_curve_csv(rep);
  CHECK(csv.find("# pinnball-csv v1: loss_curve") == 0);
  CHECK(csv.find("iter,train_loss,avg_train_loss,expected_loss,"
                 "avg_expected_loss,max_drift") != std::string::npos);
}

TEST_CASE("summary JSON carries schema, seeds and metrics") {
  TrainReport rep;
  CheckpointRecord r;
  r.iter = 10;
  r.train_loss = 0.25;
  rep.records.push_back(r);
  rep.eta = 0.01;
  ModelConfig mcfg;
  TrainConfig tcfg;
  const auto j = summary_json(rep, mcfg, tcfg, false);
  CHECK(j["schema"] == "pinnball-summary-v1");
  CHECK(j["metrics"]["final_train_loss"] == 0.25);
  CHECK(j.contains("seeds"));
  CHECK(!j.contains("timings"));
  const auto jt = summary_json(rep, mcfg, tcfg, true);
  CHECK(jt.contains("timings"));
}

TEST_CASE("SVG plots are self-contained") {
  std::vector<PlotSeries> series(1);
  series[0].name = "loss";
  for (int i = 1; i <= 20; ++i)
    series[0].xy.emplace_back(double(i), 1.0 / double(i));
  const std::string svg = svg_line_plot("demo", "iteration", "loss", series);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("href") == std::string::npos);     // no external assets
  CHECK(svg.find("http://www.w3.org/2000/svg") != std::string::npos);
  CHECK(svg.find("loss") != std::string::npos);
}

TEST_CASE("grid runner produces deterministic cells") {
  GridOptions opt;
  opt.m_grid = {16};
  opt.n_grid = {32};
  opt.T = 200;
  opt.eval_every = 100;
  opt.n_test = 200;
  opt.seed = 3;
  opt.scale = 1.0;
  const GridResult r1 = run_loss_grid(opt, nullptr);
  const GridResult r2 = run_loss_grid(opt, nullptr);
  CHECK(loss_curve_csv(r1.cells[0].report) == loss_curve_csv(r2.cells[0].report));
}

TEST_CASE("scale caps the width and shrinks the horizon") {
  GridOptions opt;
  opt.T = 100'000;
  opt.scale = 0.1;
  CHECK(opt.effective_T() == 10'000);
  CHECK(opt.effective_m(10'000) == 1000);
  CHECK(opt.effective_m(100) == 100);
  opt.scale = 1.0;
  CHECK(opt.effective_m(10'000) == 10'000);
}
