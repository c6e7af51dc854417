#include <doctest.h>

#include <cmath>

#include "pinnball/finite_diff.hpp"
#include "pinnball/geometry.hpp"

using namespace pinnball;

TEST_CASE("laplacian of |x|^2 is 2d") {
  RngStream rng(1, "test");
  const Points pts = sample_unit_ball(rng, 3, 5);
  for (std::size_t i = 0; i < pts.count; ++i) {
    const double lap = fd_laplacian(
        [](std::span<const double> x) { return dot(x, x); }, pts[i], 1e-4);
    CHECK(std::abs(lap - 6.0) < 1e-6);
  }
}

TEST_CASE("laplacian of a constant vanishes") {
  const std::vector<double> x = {0.2, -0.1, 0.4};
  const double lap =
      fd_laplacian([](std::span<const double>) { return 3.5; }, x, 1e-4);
  CHECK(std::abs(lap) < 1e-8);
}

// exact up to rounding on cubics
TEST_CASE("laplacian is near-exact on degree-3 polynomials") {
  const auto cubic = [](std::span<const double> x) {
    return x[0] * x[0] * x[0] - 2.0 * x[1] * x[1] * x[0] + 0.5 * x[2];
  };
  const std::vector<double> x = {0.3, -0.2, 0.1};
  const double expect = 6.0 * x[0] - 4.0 * x[0];
  CHECK(std::abs(fd_laplacian(cubic, x, 1e-4) - expect) < 1e-7);
}

TEST_CASE("gradient of the squared Frobenius norm is 2W") {
  Matrix w(3, 2);
  double v = 0.1;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) w(i, j) = (v += 0.07);
  const Matrix g = fd_gradient(
      [](const Matrix& m) {
        return matrix_norm(m, MatrixNorm::frobenius) *
               matrix_norm(m, MatrixNorm::frobenius);
      },
      w);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(std::abs(g(i, j) - 2.0 * w(i, j)) < 1e-8);
}

TEST_CASE("gradient of a constant is zero") {
  Matrix w(2, 2);
  const Matrix g = fd_gradient([](const Matrix&) { return 1.0; }, w);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(g(i, j) == 0.0);
}
