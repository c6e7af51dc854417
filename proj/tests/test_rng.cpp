#include <doctest.h>

#include "pinnball/rng.hpp"

using pinnball::RngStream;
using pinnball::make_rng_stream;

TEST_CASE("same seed and label reproduce the sequence") {
  RngStream a = make_rng_stream(7, "init");
  RngStream b = make_rng_stream(7, "init");
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
}

TEST_CASE("distinct labels give distinct streams") {
  RngStream a = make_rng_stream(7, "init");
  RngStream b = make_rng_stream(7, "data");
  int differing = 0;
  for (int i = 0; i < 100; ++i)
    if (a.uniform() != b.uniform()) ++differing;
  CHECK(differing > 90);
}

TEST_CASE("distinct seeds give distinct streams") {
  RngStream a = make_rng_stream(7, "x");
  RngStream b = make_rng_stream(8, "x");
  int differing = 0;
  for (int i = 0; i < 100; ++i)
    if (a.uniform() != b.uniform()) ++differing;
  CHECK(differing > 90);
}

TEST_CASE("empty label rejected") {
  CHECK_THROWS_AS(make_rng_stream(1, ""), std::invalid_argument);
}

TEST_CASE("uniform range and mean") {
  RngStream r = make_rng_stream(11, "test");
  double sum = 0.0;
  const int n = 200'000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("normal has roughly unit variance") {
  RngStream r = make_rng_stream(3, "test");
  double sum = 0.0, sum_sq = 0.0;
  const int n = 200'000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    sum += z;
    sum_sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sum_sq / n - 1.0) < 0.02);
}

TEST_CASE("uniform_index covers the range") {
  RngStream r = make_rng_stream(5, "sgd");
  bool seen[10] = {};
  for (int i = 0; i < 1000; ++i) seen[r.uniform_index(10)] = true;
  for (bool s : seen) CHECK(s);
}

TEST_CASE("substreams are independent of the parent") {
  RngStream parent = make_rng_stream(42, "trials");
  RngStream c0 = parent.substream(0);
  RngStream c1 = parent.substream(1);
  CHECK(c0.uniform() != c1.uniform());
}
