#pragma once

// Unit-ball geometry: volume-uniform sampling and exact boundary points.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinnball/matrix.hpp"
#include "pinnball/rng.hpp"

namespace pinnball {

// Flat (count x dim) point storage.
struct Points {
  std::size_t count = 0;
  std::size_t dim = 0;
  std::vector<double> data;

  Points() = default;
  Points(std::size_t n, std::size_t d) : count(n), dim(d), data(n * d, 0.0) {}

  std::span<double> operator[](std::size_t i) {
    return {data.data() + i * dim, dim};
  }
  std::span<const double> operator[](std::size_t i) const {
    return {data.data() + i * dim, dim};
  }
};

// Gaussian direction times U^(1/d) radius; no rejection, so the stream
// advances by exactly 2d+1 draws per point.
inline Points sample_unit_ball(RngStream& rng, std::size_t d, std::size_t n) {
  if (d < 1 || n < 1) throw std::invalid_argument("sample_unit_ball: d,n >= 1");
  Points pts(n, d);
  std::vector<double> g(d);
  for (std::size_t k = 0; k < n; ++k) {
    double nrm2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      g[j] = rng.normal();
      nrm2 += g[j] * g[j];
    }
    const double r = std::pow(rng.uniform(), 1.0 / double(d));
    const double scale = r / std::sqrt(nrm2);
    auto p = pts[k];
    for (std::size_t j = 0; j < d; ++j) p[j] = g[j] * scale;
  }
  return pts;
}

// Boundary points with dot(x,x) == 1.0 exactly under the library's
// sequential dot-product order. The last coordinate is nudged by ulps
// until the accumulated square-norm rounds to exactly one.
inline Points sample_unit_sphere_exact(RngStream& rng, std::size_t d,
                                       std::size_t n) {
  if (d < 1 || n < 1)
    throw std::invalid_argument("sample_unit_sphere_exact: d,n >= 1");
  Points pts(n, d);
  std::vector<double> g(d);
  for (std::size_t k = 0; k < n;) {
    double nrm2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      g[j] = rng.normal();
      nrm2 += g[j] * g[j];
    }
    const double inv = 1.0 / std::sqrt(nrm2);
    auto p = pts[k];
    for (std::size_t j = 0; j < d; ++j) p[j] = g[j] * inv;

    if (d == 1) {
      p[0] = p[0] < 0 ? -1.0 : 1.0;
      ++k;
      continue;
    }
    double head = 0.0;  // partial sum over coordinates 0..d-2
    for (std::size_t j = 0; j + 1 < d; ++j) head += p[j] * p[j];
    if (head >= 1.0) continue;  // resample; degenerate rounding
    double t = std::sqrt(1.0 - head);
    bool ok = false;
    for (int step = 0; step < 64 && !ok; ++step) {
      // walk t by ulps, alternating sides
      const int off = (step % 2 == 0) ? (step / 2) : -(step / 2 + 1);
      double cand = t;
      for (int u = 0; u < std::abs(off); ++u)
        cand = std::nextafter(cand, off > 0 ? 2.0 : 0.0);
      if (head + cand * cand == 1.0) {
        p[d - 1] = (p[d - 1] < 0 ? -cand : cand);
        ok = true;
      }
    }
    if (ok) ++k;  // else resample the point
  }
  return pts;
}

}  // namespace pinnball
