#pragma once

#include <cmath>
#include <cstdint>

#include "nfb/linalg/dense.hpp"
#include "nfb/linalg/random.hpp"

namespace testing_support {

inline nfb::DenseVector random_vector(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  nfb::Rng rng(seed);
  nfb::DenseVector v = rng.normal_vector(n);
  for (double& x : v) x *= scale;
  return v;
}

// Reference inner product with long-double accumulation, independent of the
// dispatched kernels.
inline double ref_dot(const nfb::DenseVector& a, const nfb::DenseVector& b) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a[i]) * b[i];
  return static_cast<double>(s);
}

inline double ref_norm(const nfb::DenseVector& a) { return std::sqrt(ref_dot(a, a)); }

}  // namespace testing_support
