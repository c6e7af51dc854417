#pragma once

// Flat `key = value` run configuration with [section] headers. Unknown
// keys are rejected and every violation is reported, not just the
// first. The "table1" preset expands to the 3x3 reproduction grid.

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "pinnball/model.hpp"
#include "pinnball/train.hpp"

namespace pinnball {

struct RunConfig {
  // model
  std::size_t d = 3;
  double alpha = 0.0;
  double beta = 0.5;
  std::vector<std::size_t> m_grid = {100};  // single entry for plain runs
  // target
  std::string target_kind = "norm_sq";
  std::string target_spec;
  // dataset
  std::vector<std::size_t> n_grid = {1000};
  std::uint64_t data_seed = 1;
  // training
  double eta = 0.0;  // 0 -> eta_scale / m
  double eta_scale = 1.0;
  std::size_t T = 100'000;
  std::size_t eval_every = 1'000;
  std::size_t n_test = 100'000;
  double blowup_w_max = 10.0;
  double blowup_psi_max = 1e3;
  // monitors
  bool monitor_gaps = false;
  std::size_t probe_points = 256;
  // output
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  std::string preset;

  std::size_t m() const { return m_grid.front(); }
  std::size_t n() const { return n_grid.front(); }

  ModelConfig model_config(std::size_t width, std::uint64_t model_seed) const {
    ModelConfig mc;
    mc.d = d;
    mc.m = width;
    mc.alpha = alpha;
    mc.beta = beta;
    mc.seed = model_seed;
    return mc;
  }

  TrainConfig train_config(std::uint64_t train_seed) const {
    TrainConfig tc;
    tc.eta = eta;
    tc.eta_scale = eta_scale;
    tc.T = T;
    tc.eval_every = eval_every;
    tc.n_test = n_test;
    tc.blowup_w_max = blowup_w_max;
    tc.blowup_psi_max = blowup_psi_max;
    tc.seed = train_seed;
    tc.monitor_gaps = monitor_gaps;
    tc.probe_points = probe_points;
    return tc;
  }
};

struct ParseOutcome {
  RunConfig config;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

inline std::vector<std::size_t> parse_size_list(const std::string& v) {
  std::vector<std::size_t> out;
  std::stringstream ss(v);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const long long k = std::stoll(trim(cell));
    if (k < 0) throw std::invalid_argument("negative");
    out.push_back(std::size_t(k));
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

}  // namespace detail

inline ParseOutcome parse_config(const std::string& text) {
  ParseOutcome out;
  RunConfig& c = out.config;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;

  const auto fail = [&](const std::string& key, const std::string& why) {
    out.violations.push_back("line " + std::to_string(line_no) + ": " + key +
                             ": " + why);
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::string s = detail::trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[' && s.back() == ']') {
      section = detail::trim(s.substr(1, s.size() - 2));
      if (section != "model" && section != "target" && section != "dataset" &&
          section != "train" && section != "monitors" && section != "output")
        fail(section, "unknown section");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      fail(s, "expected key = value");
      continue;
    }
    const std::string key = detail::trim(s.substr(0, eq));
    const std::string val = detail::trim(s.substr(eq + 1));
    const std::string qual = section.empty() ? key : section + "." + key;

    try {
      if (qual == "model.d") {
        const long long v = std::stoll(val);
        if (v < 1) throw std::out_of_range("d >= 1 required");
        c.d = std::size_t(v);
      } else if (qual == "model.m") {
        const long long v = std::stoll(val);
        if (v < 1) throw std::out_of_range("m >= 1 required");
        c.m_grid = {std::size_t(v)};
      } else if (qual == "model.m_grid") {
        c.m_grid = detail::parse_size_list(val);
        for (auto v : c.m_grid)
          if (v < 1) throw std::out_of_range("m >= 1 required");
      } else if (qual == "model.alpha") {
        c.alpha = std::stod(val);
        if (c.alpha < 0.0) throw std::out_of_range("alpha >= 0 required");
      } else if (qual == "model.beta") {
        c.beta = std::stod(val);
        if (c.beta < 0.0) throw std::out_of_range("beta >= 0 required");
      } else if (qual == "model.seed" || qual == "output.seed") {
        c.seed = std::stoull(val);
      } else if (qual == "target.kind") {
        if (val != "norm_sq" && val != "poly" && val != "polynomial" &&
            val != "constant")
          throw std::out_of_range("one of norm_sq|poly|constant");
        c.target_kind = val;
      } else if (qual == "target.spec") {
        c.target_spec = val;
      } else if (qual == "dataset.n") {
        const long long v = std::stoll(val);
        if (v < 1) throw std::out_of_range("n >= 1 required");
        c.n_grid = {std::size_t(v)};
      } else if (qual == "dataset.n_grid") {
        c.n_grid = detail::parse_size_list(val);
        for (auto v : c.n_grid)
          if (v < 1) throw std::out_of_range("n >= 1 required");
      } else if (qual == "dataset.seed") {
        c.data_seed = std::stoull(val);
      } else if (qual == "train.eta") {
        c.eta = std::stod(val);
        if (c.eta < 0.0) throw std::out_of_range("eta >= 0 required");
      } else if (qual == "train.eta_scale") {
        c.eta_scale = std::stod(val);
        if (!(c.eta_scale > 0.0)) throw std::out_of_range("eta_scale > 0");
      } else if (qual == "train.T") {
        c.T = std::stoull(val);
      } else if (qual == "train.eval_every") {
        const long long v = std::stoll(val);
        if (v < 1) throw std::out_of_range("eval_every >= 1 required");
        c.eval_every = std::size_t(v);
      } else if (qual == "train.n_test") {
        const long long v = std::stoll(val);
        if (v < 1) throw std::out_of_range("n_test >= 1 required");
        c.n_test = std::size_t(v);
      } else if (qual == "train.blowup_w_max") {
        c.blowup_w_max = std::stod(val);
        if (!(c.blowup_w_max > 0.0)) throw std::out_of_range("> 0 required");
      } else if (qual == "train.blowup_psi_max") {
        c.blowup_psi_max = std::stod(val);
        if (!(c.blowup_psi_max > 0.0)) throw std::out_of_range("> 0 required");
      } else if (qual == "monitors.gap") {
        if (val != "true" && val != "false")
          throw std::out_of_range("true|false");
        c.monitor_gaps = val == "true";
      } else if (qual == "monitors.probe_points") {
        const long long v = std::stoll(val);
        if (v < 1) throw std::out_of_range(">= 1 required");
        c.probe_points = std::size_t(v);
      } else if (qual == "output.dir") {
        c.out_dir = val;
      } else if (qual == "preset" || qual == "output.preset") {
        if (val != "table1") throw std::out_of_range("unknown preset");
        c.preset = val;
      } else {
        fail(qual, "unknown key");
      }
    } catch (const std::invalid_argument&) {
      fail(qual, "cannot parse value '" + val + "'");
    } catch (const std::out_of_range& e) {
      fail(qual, std::string("range violation (") + e.what() + ")");
    }
  }

  if (c.preset == "table1") {
    c.d = 3;
    c.alpha = 0.0;
    c.beta = 0.5;
    c.m_grid = {100, 1000, 10000};
    c.n_grid = {100, 1000, 10000};
    c.T = 1'000'000;
    c.target_kind = "norm_sq";
  }
  if (c.T > 0 && c.eval_every > c.T)
    out.violations.push_back("train.eval_every: must be <= train.T");
  return out;
}

}  // namespace pinnball
