#pragma once

#include <cstdint>

#include "nfb/linalg/random.hpp"
#include "nfb/operators/operators.hpp"

namespace nfb {

enum class Part { absent, present, zero };

struct ProblemShape {
  std::size_t primal = 20;
  std::size_t dual = 8;
  Part C = Part::present;
  Part D = Part::present;
  Part L = Part::present;  // zero: zero matrix with B^{-1} resolvent returning 0
};

DenseMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale);

/// Operator norm by power iteration (20000 steps, fixed seed).
double matrix_norm(const DenseMatrix& m);

/// A = box [-1,1]^n, C = M^T(Mx - b), D = K x with K skew plus a small PSD
/// part, L random with B = |.|_1 (so J_{sigma B^{-1}} clamps to [-1,1]).
///
/// The random stream is consumed identically whatever parts are requested,
/// so shapes that differ only in absent/zero parts share their data.
SplitProblem random_problem(std::uint64_t seed, const ProblemShape& shape = {});

}  // namespace nfb
