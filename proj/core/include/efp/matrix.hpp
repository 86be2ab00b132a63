#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace efp {

/// Scalar-multiplication (SM) and assignment (AS) counters.
///
/// A meter is owned by one caller at a time; the counters only ever grow.
class CostMeter {
 public:
  void add_sm(std::uint64_t n) noexcept { sm_ += n; }
  void add_as(std::uint64_t n) noexcept { as_ += n; }

  [[nodiscard]] std::uint64_t sm() const noexcept { return sm_; }
  [[nodiscard]] std::uint64_t as() const noexcept { return as_; }

 private:
  std::uint64_t sm_ = 0;
  std::uint64_t as_ = 0;
};

/// Dense row-major matrix of finite doubles with positive dimensions.
class Matrix {
 public:
  /// Zero matrix.
  Matrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of row-major `data`; rejects wrong length or non-finite entries.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  [[nodiscard]] std::span<double> row(std::size_t r) noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  [[nodiscard]] std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
  [[nodiscard]] std::span<double> data() noexcept { return data_; }

  /// Max absolute row sum.
  [[nodiscard]] double norm_inf() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// Dense vector of finite doubles with positive length.
class Vector {
 public:
  explicit Vector(std::size_t len);
  explicit Vector(std::vector<double> data);
  Vector(std::initializer_list<double> data);

  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
  [[nodiscard]] std::span<double> data() noexcept { return data_; }

  /// Max absolute entry.
  [[nodiscard]] double norm_inf() const noexcept;

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> data_;
};

/// a * b. Adds a.rows * a.cols * b.cols to meter.sm.
Matrix mat_mul(const Matrix& a, const Matrix& b, CostMeter& meter);

/// No multiplications and no assignments are metered.
Matrix transpose(const Matrix& a);

/// Gauss-Jordan inversion with partial pivoting, performed in place on a copy.
///
/// Each of the n pivot steps scales the pivot row (n SM) and eliminates the
/// pivot column from the other n-1 rows (n SM each), so meter.sm grows by
/// exactly n^3. Reciprocals of pivots and row swaps are not metered.
///
/// Throws SingularMatrixError when a pivot magnitude falls below
/// 1e-12 times the max-abs entry of the original row it came from.
Matrix inverse(const Matrix& a, CostMeter& meter);

/// a * v. Adds a.rows * a.cols to meter.sm.
Vector mat_vec(const Matrix& a, const Vector& v, CostMeter& meter);

/// Entries i.i.d. uniform on [low, high); identical seed gives identical output.
Matrix random_matrix(std::uint64_t seed, std::size_t rows, std::size_t cols, double low,
                     double high);
Vector random_vector(std::uint64_t seed, std::size_t len, double low, double high);

double max_abs_diff(const Matrix& a, const Matrix& b);
double max_abs_diff(const Vector& a, const Vector& b);

/// Numerical rank via Gaussian elimination with full pivoting.
/// Pivots below `tol` times the largest entry count as zero.
std::size_t rank(const Matrix& a, double tol = 1e-9);

}  // namespace efp
