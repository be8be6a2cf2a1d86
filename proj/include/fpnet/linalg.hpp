#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace fpnet {

using Vector = std::vector<double>;

/// Dense real matrix, row-major. Entries are finite on construction.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> entries() const noexcept { return data_; }
  std::span<double> entries() noexcept { return data_; }

  /// Max absolute row sum.
  double norm_inf() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Eigenvalue with the real part of a unit-norm eigenvector.
struct EigenPair {
  double value_re = 0.0;
  double value_im = 0.0;
  Vector vector;
};

Vector multiply(const Matrix& a, std::span<const double> x);
Matrix multiply(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
/// Square submatrix on the given row/column indices.
Matrix submatrix(const Matrix& a, std::span<const std::size_t> idx);

double norm_inf(std::span<const double> x);
double norm2(std::span<const double> x);

/// Gaussian elimination with partial pivoting. Throws SingularMatrix when a
/// pivot magnitude drops below 1e-12.
Vector solve_linear(const Matrix& a, std::span<const double> rhs);

/// All eigenvalues of a square matrix (n <= 64) via Householder reduction to
/// Hessenberg form and Francis double-shift QR. Sorted by descending real
/// part; within 1e-10 real parts, real before complex, then larger imaginary
/// part first. Throws NoConvergence after 100*n QR sweeps.
std::vector<std::complex<double>> eigenvalues(const Matrix& a);

/// Eigenvalue with largest real part (same tie-breaking as `eigenvalues`) and
/// an eigenvector from inverse iteration on (A - lambda I). For a complex
/// eigenvalue the vector is the real part of the eigenvector after rotating
/// its largest component onto the positive real axis. The vector has unit
/// 2-norm and its largest-magnitude entry is positive.
EigenPair dominant_real_eigenpair(const Matrix& a);

}  // namespace fpnet
