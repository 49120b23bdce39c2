#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <limits>

#include "doctest.h"
#include "nfb/errors.hpp"
#include "nfb/linalg/dense.hpp"
#include "nfb/linalg/image.hpp"
#include "nfb/linalg/linear_operator.hpp"
#include "test_support.hpp"

using namespace nfb;
using testing_support::random_vector;
using testing_support::ref_dot;

namespace {

GrayImage random_image(std::size_t w, std::size_t h, std::uint64_t seed) {
  return GrayImage::from_vector(w, h, random_vector(w * h, seed));
}

double image_dot(const GrayImage& a, const GrayImage& b) {
  return ref_dot(a.to_vector(), b.to_vector());
}

double max_adjoint_gap(const LinearOperator& op, int pairs, std::uint64_t seed) {
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const DenseVector x = random_vector(op.in_dim, seed + 2 * k);
    const DenseVector y = random_vector(op.out_dim, seed + 2 * k + 1);
    worst = std::max(worst, std::abs(ref_dot(op.apply(x), y) - ref_dot(x, op.adjoint_apply(y))));
  }
  return worst;
}

}  // namespace

TEST_CASE("DenseVector rejects non-finite input and arithmetic checks sizes") {
  CHECK_THROWS_AS(DenseVector({1.0, std::numeric_limits<double>::quiet_NaN()}),
                  std::invalid_argument);
  CHECK_THROWS_AS(DenseVector({std::numeric_limits<double>::infinity()}), std::invalid_argument);
  CHECK_THROWS_AS(dot(DenseVector{1.0, 2.0}, DenseVector{1.0}), DimensionError);
  CHECK_THROWS_AS(DenseMatrix(2, 3, std::vector<double>(5, 0.0)), DimensionError);

  const DenseVector a{1.0, 2.0, 3.0};
  const DenseVector b{4.0, -5.0, 6.0};
  CHECK(dot(a, b) == doctest::Approx(12.0));
  CHECK(dist2(a, b) == doctest::Approx(9.0 + 49.0 + 9.0));
  CHECK(lincomb(2.0, a, -1.0, b) == DenseVector{-2.0, 9.0, 0.0});
  CHECK(concat(a, b).size() == 6);
  CHECK(slice(concat(a, b), 3, 3) == b);
}

TEST_CASE("DenseMatrix products match hand computation") {
  const DenseMatrix m(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK(m.multiply(DenseVector{1.0, 0.0, -1.0}) == DenseVector{-2.0, -2.0});
  CHECK(m.multiply_transpose(DenseVector{1.0, 1.0}) == DenseVector{5.0, 7.0, 9.0});
}

TEST_CASE("op_norm_estimate on identity and diagonal") {
  CHECK(op_norm_estimate(identity_operator(5), 5, 10, 1) == doctest::Approx(1.0).epsilon(1e-15));
  const double est = op_norm_estimate(diagonal_operator(DenseVector{3.0, 1.0, 0.5}), 3, 100, 3);
  CHECK(std::abs(est - 3.0) < 1e-8);
  CHECK_THROWS_AS(op_norm_estimate(identity_operator(5), 4, 10, 1), DimensionError);
}

TEST_CASE("op_norm_estimate matches SVD of a random 50x30 matrix") {
  Rng rng(7);
  DenseMatrix m(50, 30);
  for (std::size_t r = 0; r < 50; ++r) {
    for (std::size_t c = 0; c < 30; ++c) m(r, c) = rng.normal();
  }
  Eigen::MatrixXd e(50, 30);
  for (int r = 0; r < 50; ++r) {
    for (int c = 0; c < 30; ++c) e(r, c) = m(r, c);
  }
  const double sigma_max = Eigen::JacobiSVD<Eigen::MatrixXd>(e).singularValues()(0);
  const double est = op_norm_estimate(matrix_operator(m), 30, 5000, 7);
  CHECK(std::abs(est - sigma_max) < 1e-6);
}

TEST_CASE("op_norm_estimate is nondecreasing in the iteration cap") {
  Rng rng(11);
  DenseMatrix m(20, 12);
  for (std::size_t r = 0; r < 20; ++r) {
    for (std::size_t c = 0; c < 12; ++c) m(r, c) = rng.normal();
  }
  const LinearOperator op = matrix_operator(m);
  double prev = 0.0;
  for (int iters = 1; iters <= 60; ++iters) {
    const double est = op_norm_estimate(op, 12, iters, 5);
    CHECK(est >= prev);
    prev = est;
  }
  const NormEstimate capped = op_norm_estimate_detailed(op, 12, 2, 5);
  CHECK(capped.hit_cap);
}

TEST_CASE("discrete gradient examples") {
  const auto g0 = discrete_gradient(GrayImage(7, 5, 0.37));
  for (double v : g0.horizontal.pixels()) CHECK(v == 0.0);
  for (double v : g0.vertical.pixels()) CHECK(v == 0.0);

  const GrayImage img(2, 2, {0, 1, 0, 1});
  const auto g = discrete_gradient(img);
  CHECK(g.horizontal.pixels() == std::vector<double>{1, 0, 1, 0});
  CHECK(g.vertical.pixels() == std::vector<double>{0, 0, 0, 0});

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GrayImage x = random_image(8, 8, seed);
    const auto gx = discrete_gradient(x);
    const double lhs = image_dot(gx.horizontal, gx.horizontal) + image_dot(gx.vertical, gx.vertical);
    CHECK(lhs <= 8.0 * image_dot(x, x));
  }
}

TEST_CASE("divergence is the negative adjoint of the gradient") {
  const GrayImage z(8, 8, 0.0);
  const GrayImage d0 = discrete_divergence({z, z});
  for (double v : d0.pixels()) CHECK(v == 0.0);
  const GrayImage d1 = discrete_divergence(discrete_gradient(GrayImage(8, 8, 2.5)));
  for (double v : d1.pixels()) CHECK(v == 0.0);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const GrayImage x = random_image(8, 8, 3 * seed + 1);
    const GradientField y{random_image(8, 8, 3 * seed + 2), random_image(8, 8, 3 * seed + 3)};
    const auto gx = discrete_gradient(x);
    const double lhs = image_dot(gx.horizontal, y.horizontal) + image_dot(gx.vertical, y.vertical);
    CHECK(std::abs(lhs + image_dot(x, discrete_divergence(y))) < 1e-10);
  }
  CHECK_THROWS_AS(discrete_divergence({GrayImage(4, 4), GrayImage(4, 5)}), DimensionError);
}

TEST_CASE("Haar transform: constant image, isometry, round trip") {
  const double c = 0.3;
  const GrayImage w = haar_transform(GrayImage(8, 8, c), 3);
  CHECK(w(0, 0) == doctest::Approx(8.0 * c).epsilon(1e-14));
  for (std::size_t i = 1; i < w.size(); ++i) CHECK(std::abs(w.pixels()[i]) < 1e-15);

  const GrayImage x16 = random_image(16, 16, 21);
  CHECK(std::abs(std::sqrt(image_dot(haar_transform(x16, 3), haar_transform(x16, 3))) -
                 std::sqrt(image_dot(x16, x16))) < 1e-10);

  const GrayImage x32 = random_image(32, 24, 22);
  const GrayImage back = haar_inverse(haar_transform(x32, 3), 3);
  CHECK(max_abs_diff(back.to_vector(), x32.to_vector()) < 1e-12);

  CHECK_THROWS_AS(haar_transform(GrayImage(12, 16), 3), DimensionError);
}

TEST_CASE("blur examples") {
  const auto avg3 = averaging_kernel(3);
  const GrayImage c = blur_apply(GrayImage(9, 7, 0.42), avg3);
  for (double v : c.pixels()) CHECK(v == doctest::Approx(0.42).epsilon(1e-14));

  GrayImage impulse(5, 5, 0.0);
  impulse(2, 2) = 1.0;
  const GrayImage b = blur_apply(impulse, avg3);
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t col = 0; col < 5; ++col) {
      const bool inside = r >= 1 && r <= 3 && col >= 1 && col <= 3;
      CHECK(b(r, col) == doctest::Approx(inside ? 1.0 / 9.0 : 0.0));
    }
  }

  const double t = op_norm_estimate(blur_operator(32, 32, avg3), 32 * 32, 20000, 3);
  CHECK(std::abs(t - 1.0) < 1e-6);

  CHECK_THROWS_AS(blur_apply(impulse, DenseMatrix(2, 2, 0.25)), std::invalid_argument);
}

TEST_CASE("Gaussian 3x3 kernel with sigma 0.5") {
  const DenseMatrix k = gaussian_kernel(3, 0.5);
  // Independent closed form: weights exp(-r^2/(2 s^2)) with r^2 in {0,1,2}.
  const double e1 = std::exp(-2.0);
  const double e2 = std::exp(-4.0);
  const double total = 1.0 + 4.0 * e1 + 4.0 * e2;
  CHECK(k(1, 1) == doctest::Approx(1.0 / total).epsilon(1e-14));
  CHECK(k(0, 1) == doctest::Approx(e1 / total).epsilon(1e-14));
  CHECK(k(0, 0) == doctest::Approx(e2 / total).epsilon(1e-14));
  CHECK(k(1, 1) == doctest::Approx(0.6193).epsilon(1e-3));
}

TEST_CASE("every catalog operator passes the adjoint test") {
  Rng rng(5);
  DenseMatrix m(13, 9);
  for (std::size_t r = 0; r < 13; ++r) {
    for (std::size_t c = 0; c < 9; ++c) m(r, c) = rng.normal();
  }
  CHECK(max_adjoint_gap(identity_operator(6), 100, 1) < 1e-10);
  CHECK(max_adjoint_gap(diagonal_operator(random_vector(6, 2)), 100, 3) < 1e-10);
  CHECK(max_adjoint_gap(matrix_operator(m), 100, 5) < 1e-10);
  CHECK(max_adjoint_gap(gradient_operator(8, 6), 100, 7) < 1e-10);
  CHECK(max_adjoint_gap(haar_operator(16, 8, 3), 100, 9) < 1e-10);
  CHECK(max_adjoint_gap(blur_operator(10, 7, averaging_kernel(3)), 100, 11) < 1e-10);
  CHECK(max_adjoint_gap(blur_operator(12, 12, averaging_kernel(9)), 100, 13) < 1e-10);
  CHECK(max_adjoint_gap(blur_operator(9, 11, gaussian_kernel(3, 0.5)), 100, 15) < 1e-10);
}

TEST_CASE("symmetric-kernel blur with symmetric padding is self-adjoint") {
  const LinearOperator t = blur_operator(12, 10, averaging_kernel(9));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DenseVector x = random_vector(120, 40 + seed);
    CHECK(max_abs_diff(t.apply(x), t.adjoint_apply(x)) < 1e-12);
  }
}

TEST_CASE("PGM round trip in binary and plain formats") {
  const auto dir = std::filesystem::temp_directory_path();
  GrayImage img(5, 3);
  for (std::size_t i = 0; i < img.size(); ++i) img.pixels()[i] = static_cast<double>(i) / 14.0;
  for (bool binary : {true, false}) {
    const auto path = dir / (binary ? "nfb_rt_p5.pgm" : "nfb_rt_p2.pgm");
    write_pgm(path, img, binary);
    const GrayImage back = read_pgm(path);
    CHECK(back.width() == 5);
    CHECK(back.height() == 3);
    CHECK(max_abs_diff(back.to_vector(), img.to_vector()) <= 0.5 / 65535.0 + 1e-15);
    std::filesystem::remove(path);
  }
  CHECK_THROWS_AS(read_pgm(dir / "definitely_missing_nfb.pgm"), IoError);
}
