#include "nfb/linalg/dense.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nfb/errors.hpp"
#include "nfb/simd/kernels.hpp"

namespace nfb {
namespace {

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

}  // namespace

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": size mismatch (" + std::to_string(a) + " vs " +
                         std::to_string(b) + ")");
  }
}

DenseVector::DenseVector(std::size_t n, double value) : data_(n, value) {
  if (!std::isfinite(value)) throw std::invalid_argument("DenseVector: non-finite fill value");
}

DenseVector::DenseVector(std::vector<double> values) : data_(std::move(values)) {
  require_finite(data_, "DenseVector");
}

DenseVector::DenseVector(std::initializer_list<double> values) : data_(values) {
  require_finite(data_, "DenseVector");
}

bool DenseVector::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double value)
    : rows_(rows), cols_(cols), data_(rows * cols, value) {
  if (rows == 0 || cols == 0) throw DimensionError("DenseMatrix: dimensions must be positive");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (rows == 0 || cols == 0) throw DimensionError("DenseMatrix: dimensions must be positive");
  require_same_size(rows * cols, data_.size(), "DenseMatrix");
  require_finite(data_, "DenseMatrix");
}

DenseVector DenseMatrix::multiply(const DenseVector& x) const {
  require_same_size(cols_, x.size(), "DenseMatrix::multiply");
  DenseVector y(rows_);
  simd::active_kernels().gemv(data_.data(), rows_, cols_, x.data(), y.data());
  return y;
}

DenseVector DenseMatrix::multiply_transpose(const DenseVector& y) const {
  require_same_size(rows_, y.size(), "DenseMatrix::multiply_transpose");
  DenseVector x(cols_);
  simd::active_kernels().gemv_t(data_.data(), rows_, cols_, y.data(), x.data());
  return x;
}

double dot(const DenseVector& a, const DenseVector& b) {
  require_same_size(a.size(), b.size(), "dot");
  return simd::active_kernels().dot(a.data(), b.data(), a.size());
}

double norm(const DenseVector& a) {
  return std::sqrt(simd::active_kernels().dot(a.data(), a.data(), a.size()));
}

double dist2(const DenseVector& a, const DenseVector& b) {
  require_same_size(a.size(), b.size(), "dist2");
  return simd::active_kernels().dist2(a.data(), b.data(), a.size());
}

double max_abs_diff(const DenseVector& a, const DenseVector& b) {
  require_same_size(a.size(), b.size(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const DenseVector& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

void axpy(double alpha, const DenseVector& x, DenseVector& y) {
  require_same_size(x.size(), y.size(), "axpy");
  simd::active_kernels().axpy(alpha, x.data(), y.data(), x.size());
}

DenseVector lincomb(double a, const DenseVector& x, double b, const DenseVector& y) {
  require_same_size(x.size(), y.size(), "lincomb");
  DenseVector out(x.size());
  simd::active_kernels().axpby(a, x.data(), b, y.data(), out.data(), x.size());
  return out;
}

DenseVector operator+(const DenseVector& a, const DenseVector& b) {
  require_same_size(a.size(), b.size(), "operator+");
  DenseVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

DenseVector operator-(const DenseVector& a, const DenseVector& b) {
  require_same_size(a.size(), b.size(), "operator-");
  DenseVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

DenseVector operator*(double s, const DenseVector& a) {
  DenseVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

DenseVector concat(const DenseVector& head, const DenseVector& tail) {
  DenseVector out(head.size() + tail.size());
  std::copy(head.begin(), head.end(), out.begin());
  std::copy(tail.begin(), tail.end(), out.begin() + static_cast<std::ptrdiff_t>(head.size()));
  return out;
}

DenseVector slice(const DenseVector& v, std::size_t offset, std::size_t count) {
  if (offset + count > v.size()) throw DimensionError("slice: range out of bounds");
  DenseVector out(count);
  std::copy_n(v.begin() + static_cast<std::ptrdiff_t>(offset), count, out.begin());
  return out;
}

}  // namespace nfb
