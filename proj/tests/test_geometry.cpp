#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pinnball/geometry.hpp"

using namespace pinnball;

TEST_CASE("ball samples stay inside the ball") {
  RngStream rng(1, "data");
  const Points pts = sample_unit_ball(rng, 4, 5000);
  for (std::size_t i = 0; i < pts.count; ++i)
    CHECK(norm2(pts[i]) <= 1.0 + 1e-15);
}

// E||x|| = d/(d+1) for the volume-uniform ball
TEST_CASE("mean radius matches the closed form") {
  for (std::size_t d : {1, 2, 3, 5}) {
    RngStream rng(7, "data");
    const std::size_t n = 1'000'000;
    const Points pts = sample_unit_ball(rng, d, n);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = norm2(pts[i]);
      sum += r;
      sum_sq += r * r;
    }
    const double mean = sum / double(n);
    const double expect = double(d) / double(d + 1);
    const double sd = std::sqrt(sum_sq / double(n) - mean * mean);
    CHECK(std::abs(mean - expect) < 3.0 * sd / std::sqrt(double(n)) + 1e-12);
    if (d == 3) CHECK(std::abs(mean - 0.75) < 0.002);
  }
}

TEST_CASE("d = 1 sampling is uniform on [-1, 1]") {
  RngStream rng(13, "data");
  const std::size_t n = 1'000'000;
  const Points pts = sample_unit_ball(rng, 1, n);
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = pts[i][0];
  std::sort(xs.begin(), xs.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double cdf = (xs[i] + 1.0) / 2.0;
    ks = std::max(ks, std::abs(cdf - double(i + 1) / double(n)));
    ks = std::max(ks, std::abs(cdf - double(i) / double(n)));
  }
  CHECK(ks < 0.005);
}

TEST_CASE("draw counts are deterministic") {
  RngStream a(3, "data");
  RngStream b(3, "data");
  sample_unit_ball(a, 3, 10);
  sample_unit_ball(b, 3, 10);
  CHECK(a.call_count() == b.call_count());
  CHECK(a.call_count() == 10 * (2 * 3 + 1));
}

TEST_CASE("exact boundary points have unit square norm") {
  for (std::size_t d : {1, 2, 3, 5}) {
    RngStream rng(17, "test");
    const Points pts = sample_unit_sphere_exact(rng, d, 500);
    for (std::size_t i = 0; i < pts.count; ++i)
      CHECK(dot(pts[i], pts[i]) == 1.0);
  }
}
