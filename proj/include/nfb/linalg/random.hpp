#pragma once

#include <cstdint>
#include <random>

#include "nfb/linalg/dense.hpp"

namespace nfb {

/// Seeded generator with a portable normal sampler.  std::normal_distribution
/// is implementation-defined, so the Gaussian draws use Box-Muller on top of
/// mt19937_64 to keep instances identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1)
  double normal();
  DenseVector normal_vector(std::size_t n);
  DenseVector uniform_vector(std::size_t n, double lo, double hi);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace nfb
