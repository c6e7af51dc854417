#pragma once

// Central finite differences, used as ground-truth oracles for the
// closed-form Laplacian and gradients.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinnball/matrix.hpp"

namespace pinnball {

inline constexpr double kDefaultLaplacianStep = 1e-4;
inline constexpr double kDefaultGradientStep = 1e-6;

// sum over coordinates of (f(x+h e_i) - 2 f(x) + f(x-h e_i)) / h^2
template <typename F>
double fd_laplacian(F&& fun, std::span<const double> x,
                    double h = kDefaultLaplacianStep) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_laplacian: h > 0 required");
  std::vector<double> y(x.begin(), x.end());
  const double center = fun(std::span<const double>(y));
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double xi = y[i];
    y[i] = xi + h;
    const double fp = fun(std::span<const double>(y));
    y[i] = xi - h;
    const double fm = fun(std::span<const double>(y));
    y[i] = xi;
    acc += (fp - 2.0 * center + fm) / (h * h);
  }
  return acc;
}

// entrywise central differences of a scalar function of the matrix
template <typename F>
Matrix fd_gradient(F&& fun, const Matrix& w, double h = kDefaultGradientStep) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_gradient: h > 0 required");
  Matrix g(w.rows(), w.cols());
  Matrix probe = w;
  for (std::size_t i = 0; i < w.rows(); ++i) {
    for (std::size_t j = 0; j < w.cols(); ++j) {
      const double wij = probe(i, j);
      probe(i, j) = wij + h;
      const double fp = fun(probe);
      probe(i, j) = wij - h;
      const double fm = fun(probe);
      probe(i, j) = wij;
      g(i, j) = (fp - fm) / (2.0 * h);
    }
  }
  return g;
}

}  // namespace pinnball
