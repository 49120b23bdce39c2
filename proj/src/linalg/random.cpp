#include "nfb/linalg/random.hpp"

#include <cmath>
#include <numbers>

namespace nfb {

double Rng::uniform() {
  // 53 random bits; independent of std::generate_canonical's implementation.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

DenseVector Rng::normal_vector(std::size_t n) {
  DenseVector v(n);
  for (double& x : v) x = normal();
  return v;
}

DenseVector Rng::uniform_vector(std::size_t n, double lo, double hi) {
  DenseVector v(n);
  for (double& x : v) x = lo + (hi - lo) * uniform();
  return v;
}

}  // namespace nfb
