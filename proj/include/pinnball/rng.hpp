#pragma once

// Counter-based random streams. Every draw is a pure function of
// (seed, label, call count), so results never depend on evaluation
// order or thread scheduling.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pinnball {

namespace detail {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace detail

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view label)
      : seed_(seed), label_(label) {
    if (label.empty()) throw std::invalid_argument("RngStream: empty label");
    key_ = detail::mix64(detail::mix64(seed + detail::kGolden) ^
                         detail::fnv1a64(label));
  }

  std::uint64_t next_bits() {
    ++counter_;
    return detail::mix64(key_ + counter_ * detail::kGolden);
  }

  // uniform on [0, 1)
  double uniform() { return double(next_bits() >> 11) * 0x1.0p-53; }

  // uniform on (0, 1]; safe as a log() argument
  double uniform_open() {
    return double((next_bits() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Box-Muller; consumes exactly two draws per call
  double normal() {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // one draw; bias O(n/2^53) is irrelevant at the sizes used here
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n == 0");
    auto k = static_cast<std::size_t>(uniform() * double(n));
    return k < n ? k : n - 1;
  }

  // independent child stream, e.g. one per trial of a sweep
  RngStream substream(std::uint64_t idx) const {
    RngStream child = *this;
    child.key_ = detail::mix64(key_ ^ detail::mix64(idx + detail::kGolden));
    child.counter_ = 0;
    return child;
  }

  std::uint64_t seed() const { return seed_; }
  const std::string& label() const { return label_; }
  std::uint64_t call_count() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::string label_;
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

inline RngStream make_rng_stream(std::uint64_t seed, std::string_view label) {
  return RngStream(seed, label);
}

}  // namespace pinnball
