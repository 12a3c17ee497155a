#include "kacz/rng.hpp"

#include <algorithm>
#include <cmath>

namespace kacz {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(seed ^ splitmix64(index + 1)));
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // 1 - u keeps the log argument in (0, 1].
  double r = std::sqrt(-2.0 * std::log(1.0 - uniform01()));
  double t = 2.0 * M_PI * uniform01();
  spare_ = r * std::sin(t);
  have_spare_ = true;
  return r * std::cos(t);
}

RowSampler::RowSampler(const Matrix& a) : cum_(a.rows()) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* row = a.row_ptr(i);
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * row[j];
    acc += s;
    cum_[i] = acc;
  }
}

std::size_t RowSampler::draw(Rng& rng) const {
  double u = rng.uniform01() * cum_.back();
  auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  if (it == cum_.end()) --it;
  return static_cast<std::size_t>(it - cum_.begin());
}

}  // namespace kacz
