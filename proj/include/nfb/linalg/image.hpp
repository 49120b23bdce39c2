#pragma once

#include <cstddef>
#include <filesystem>
#include <utility>
#include <vector>

#include "nfb/linalg/dense.hpp"

namespace nfb {

/// Grayscale image stored row-major; pixel (r, c) lives at r * width + c.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(std::size_t width, std::size_t height, double value = 0.0);
  GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return pixels_[r * width_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return pixels_[r * width_ + c]; }

  const std::vector<double>& pixels() const noexcept { return pixels_; }
  std::vector<double>& pixels() noexcept { return pixels_; }

  DenseVector to_vector() const { return DenseVector(pixels_); }
  static GrayImage from_vector(std::size_t width, std::size_t height, const DenseVector& v);

  bool same_shape(const GrayImage& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> pixels_;
};

struct GradientField {
  GrayImage horizontal;
  GrayImage vertical;
};

/// Forward differences; the last column (horizontal) and last row (vertical)
/// are zero.
GradientField discrete_gradient(const GrayImage& img);

/// div = -grad^T.
GrayImage discrete_divergence(const GradientField& field);

/// Orthonormal 2-D Haar transform.  After one level the top-left quadrant
/// holds the averages; further levels recurse into it.
GrayImage haar_transform(const GrayImage& img, int level);
GrayImage haar_inverse(const GrayImage& coeffs, int level);

/// 2-D correlation with half-sample symmetric padding (the boundary pixel is
/// repeated).  `kernel` must be square with odd side.
GrayImage blur_apply(const GrayImage& img, const DenseMatrix& kernel);
GrayImage blur_adjoint(const GrayImage& img, const DenseMatrix& kernel);

DenseMatrix averaging_kernel(std::size_t side);
DenseMatrix gaussian_kernel(std::size_t side, double sigma);

/// PGM I/O.  Values in [0,1] are scaled to 16 bit on write (values outside
/// are clamped); reads rescale by maxval.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& img, bool binary = true);

}  // namespace nfb
