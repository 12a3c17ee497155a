#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "kacz/matrix.hpp"

namespace kacz {

// Seeded generator with a pinned state transition so runs are byte-identical:
// mt19937_64 for raw 64-bit words, uniform01 = (word >> 11) * 2^-53, normals
// by Box-Muller. The standard distributions are implementation-defined and
// deliberately avoided.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Independent substream: seed and index mixed through splitmix64 so trial
  // streams never overlap regardless of scheduling.
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t raw() { return eng_(); }

  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double normal();

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Draws row indices with probability ||A_i||^2 / ||A||_F^2 via a precomputed
// cumulative table and binary search.
class RowSampler {
 public:
  explicit RowSampler(const Matrix& a);
  std::size_t draw(Rng& rng) const;

 private:
  std::vector<double> cum_;
};

}  // namespace kacz
