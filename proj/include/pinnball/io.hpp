#pragma once

// File emission: atomic writes, fixed CSV schemas (versioned in the
// header comment line), and the JSON run summary.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "pinnball/train.hpp"

namespace pinnball {

inline constexpr const char* kVersion = "1.0.0";

// decimal-17: doubles round-trip exactly
inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// temp + rename, so readers never observe a partial file
inline void atomic_write_file(const std::filesystem::path& path,
                              const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- loss curve CSV -------------------------------------------------------

inline std::string loss_curve_csv(const TrainReport& rep) {
  std::ostringstream out;
  out << "# pinnball-csv v1: loss_curve\n";
  out << "iter,train_loss,avg_train_loss,expected_loss,avg_expected_loss,"
         "max_drift\n";
  for (const auto& r : rep.records) {
    out << r.iter << "," << fmt17(r.train_loss) << ","
        << fmt17(r.avg_train_loss) << "," << fmt17(r.expected_loss) << ","
        << fmt17(r.avg_expected_loss) << "," << fmt17(r.max_drift) << "\n";
  }
  return out.str();
}

inline std::string monitor_csv(const TrainReport& rep) {
  std::ostringstream out;
  out << "# pinnball-csv v1: monitors\n";
  out << "iter,max_drift,drift_envelope,psi_g_gap,grad_gap\n";
  for (const auto& r : rep.records) {
    out << r.iter << "," << fmt17(r.max_drift) << ","
        << fmt17(r.drift_envelope) << "," << fmt17(r.psi_g_gap) << ","
        << fmt17(r.grad_gap) << "\n";
  }
  return out.str();
}

// ---- JSON summary ---------------------------------------------------------

// with_timings=false keeps sweep output trees byte-identical across runs
inline nlohmann::json summary_json(const TrainReport& rep,
                                   const ModelConfig& mcfg,
                                   const TrainConfig& tcfg,
                                   bool with_timings = true) {
  nlohmann::json j;
  j["schema"] = "pinnball-summary-v1";
  j["versions"] = {{"pinnball", kVersion}, {"csv", "v1"}};
  j["config"] = {{"d", mcfg.d},
                 {"m", mcfg.m},
                 {"alpha", mcfg.alpha},
                 {"beta", mcfg.beta},
                 {"eta", rep.eta},
                 {"T", tcfg.T},
                 {"eval_every", tcfg.eval_every},
                 {"n_test", tcfg.n_test},
                 {"blowup_w_max", tcfg.blowup_w_max},
                 {"blowup_psi_max", tcfg.blowup_psi_max}};
  j["seeds"] = {{"model", mcfg.seed}, {"train", tcfg.seed}};
  const auto& last = rep.final_record();
  j["metrics"] = {{"final_iter", last.iter},
                  {"final_train_loss", last.train_loss},
                  {"final_avg_train_loss", last.avg_train_loss},
                  {"final_expected_loss", last.expected_loss},
                  {"final_avg_expected_loss", last.avg_expected_loss},
                  {"max_drift", last.max_drift}};
  j["blowup"] = rep.blew_up();
  if (rep.blew_up()) {
    j["blowup_iter"] = rep.blowup->iter;
    j["blowup_reason"] = rep.blowup->reason;
  }
  if (with_timings) j["timings"] = {{"wall_seconds", rep.wall_seconds}};
  return j;
}

}  // namespace pinnball
