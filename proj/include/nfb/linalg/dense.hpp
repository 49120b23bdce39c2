#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace nfb {

/// Real vector used for iterates and problem data.
///
/// Construction from caller-supplied values rejects NaN/Inf.  Results of
/// arithmetic are not re-checked; the engine inspects iterates for
/// divergence itself.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t n, double value = 0.0);
  explicit DenseVector(std::vector<double> values);
  DenseVector(std::initializer_list<double> values);

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::span<double> span() noexcept { return data_; }
  std::span<const double> span() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  bool all_finite() const noexcept;

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> data_;
};

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double value = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  const double* data() const noexcept { return data_.data(); }
  double* data() noexcept { return data_.data(); }

  DenseVector multiply(const DenseVector& x) const;             // A x
  DenseVector multiply_transpose(const DenseVector& y) const;   // A^T y

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Vector arithmetic.  All binary operations require equal sizes and throw
// DimensionError otherwise.
double dot(const DenseVector& a, const DenseVector& b);
double norm(const DenseVector& a);
double dist2(const DenseVector& a, const DenseVector& b);
double max_abs_diff(const DenseVector& a, const DenseVector& b);
double max_abs(const DenseVector& a);

void axpy(double alpha, const DenseVector& x, DenseVector& y);  // y += alpha x
DenseVector lincomb(double a, const DenseVector& x, double b, const DenseVector& y);

DenseVector operator+(const DenseVector& a, const DenseVector& b);
DenseVector operator-(const DenseVector& a, const DenseVector& b);
DenseVector operator*(double s, const DenseVector& a);

/// Concatenate two vectors (primal block first).
DenseVector concat(const DenseVector& head, const DenseVector& tail);
DenseVector slice(const DenseVector& v, std::size_t offset, std::size_t count);

void require_same_size(std::size_t a, std::size_t b, const char* what);

}  // namespace nfb
