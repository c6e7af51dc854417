#pragma once

// Training data on the unit ball and the two loss estimators.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pinnball/geometry.hpp"
#include "pinnball/model.hpp"
#include "pinnball/target.hpp"

namespace pinnball {

struct Dataset {
  Points points;
  std::vector<double> labels;
  std::uint64_t seed = 0;  // provenance
  std::string rng_label;

  std::size_t size() const { return points.count; }
  std::size_t dim() const { return points.dim; }
};

inline Dataset build_dataset(const TargetFunction& f, std::size_t n,
                             std::size_t d, RngStream& rng) {
  if (f.value_at_zero != 0.0)
    std::cerr << "warning: target has f(0) = " << f.value_at_zero
              << "; apply shift_rhs before theory runs\n";
  Dataset ds;
  ds.seed = rng.seed();
  ds.rng_label = rng.label();
  ds.points = sample_unit_ball(rng, d, n);
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ds.labels[i] = f(ds.points[i]);
    if (!std::isfinite(ds.labels[i]))
      throw std::invalid_argument("build_dataset: non-finite label");
  }
  return ds;
}

// mean squared residual over the dataset, fixed pairwise reduction
inline double empirical_loss(const ModelParams& p, const Dataset& data) {
  const PsiBatchEval psi(p);
  std::vector<double> sq(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r = psi(data.points[i]) - data.labels[i];
    sq[i] = r * r;
  }
  const double loss = pairwise_sum(sq) / double(data.size());
  if (!std::isfinite(loss)) throw blowup_error("empirical_loss: non-finite");
  return loss;
}

// Monte-Carlo estimate of the expected squared residual on a fixed,
// precomputed test set
inline double expected_loss(const ModelParams& p, const Points& test_points,
                            std::span<const double> test_labels) {
  const PsiBatchEval psi(p);
  std::vector<double> sq(test_points.count);
  for (std::size_t i = 0; i < test_points.count; ++i) {
    const double r = psi(test_points[i]) - test_labels[i];
    sq[i] = r * r;
  }
  const double loss = pairwise_sum(sq) / double(test_points.count);
  if (!std::isfinite(loss)) throw blowup_error("expected_loss: non-finite");
  return loss;
}

// convenience one-shot form: draws the test set from rng
inline double expected_loss(const ModelParams& p, const TargetFunction& f,
                            std::size_t n_test, RngStream& rng) {
  if (n_test < 1) throw std::invalid_argument("expected_loss: n_test >= 1");
  Points pts = sample_unit_ball(rng, p.cfg.d, n_test);
  std::vector<double> labels(n_test);
  for (std::size_t i = 0; i < n_test; ++i) labels[i] = f(pts[i]);
  return expected_loss(p, pts, labels);
}

// ---- CSV round trip ------------------------------------------------------

// one row per sample, columns x_1..x_d,label; decimal-17 formatting so
// values survive the round trip bit-exactly
inline std::string dataset_to_csv(const Dataset& ds) {
  std::ostringstream out;
  out << "# pinnball-csv v1: dataset\n";
  for (std::size_t j = 0; j < ds.dim(); ++j) out << "x_" << (j + 1) << ",";
  out << "label\n";
  char buf[64];
  for (std::size_t i = 0; i < ds.size(); ++i) {
    auto x = ds.points[i];
    for (std::size_t j = 0; j < ds.dim(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", x[j]);
      out << buf << ",";
    }
    std::snprintf(buf, sizeof buf, "%.17g", ds.labels[i]);
    out << buf << "\n";
  }
  return out.str();
}

inline Dataset dataset_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  std::size_t d = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("x_1", 0) == 0) {  // header row
      d = std::count(line.begin(), line.end(), ',');
      continue;
    }
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (d == 0 || row.size() != d + 1)
      throw std::invalid_argument("dataset_from_csv: malformed row '" + line +
                                  "'");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("dataset_from_csv: no rows");
  Dataset ds;
  ds.points = Points(rows.size(), d);
  ds.labels.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) ds.points[i][j] = rows[i][j];
    ds.labels[i] = rows[i][d];
  }
  return ds;
}

}  // namespace pinnball
