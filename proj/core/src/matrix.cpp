#include "efp/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "efp/errors.hpp"
#include "efp/rng.hpp"

namespace efp {
namespace {

void require_finite(std::span<const double> data, const char* what) {
  for (double x : data) {
    if (!std::isfinite(x)) throw ParameterError(std::string(what) + ": non-finite entry");
  }
}

std::string shape_str(const Matrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

constexpr double kSingularRelTol = 1e-12;

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) throw ShapeError("matrix dimensions must be positive");
  data_.assign(rows * cols, 0.0);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows == 0 || cols == 0) throw ShapeError("matrix dimensions must be positive");
  if (data_.size() != rows * cols) throw ShapeError("matrix data length does not match shape");
  require_finite(data_, "matrix");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("ragged row list");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

double Matrix::norm_inf() const noexcept {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (double x : row(i)) s += std::abs(x);
    best = std::max(best, s);
  }
  return best;
}

Vector::Vector(std::size_t len) : data_(len, 0.0) {
  if (len == 0) throw ShapeError("vector length must be positive");
}

Vector::Vector(std::vector<double> data) : data_(std::move(data)) {
  if (data_.empty()) throw ShapeError("vector length must be positive");
  require_finite(data_, "vector");
}

Vector::Vector(std::initializer_list<double> data) : Vector(std::vector<double>(data)) {}

double Vector::norm_inf() const noexcept {
  double best = 0.0;
  for (double x : data_) best = std::max(best, std::abs(x));
  return best;
}

Matrix mat_mul(const Matrix& a, const Matrix& b, CostMeter& meter) {
  if (a.cols() != b.rows()) {
    throw ShapeError("mat_mul: " + shape_str(a) + " times " + shape_str(b));
  }
  const std::size_t n = a.rows(), inner = a.cols(), p = b.cols();
  Matrix c(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    double* out = c.row(i).data();
    const double* arow = a.row(i).data();
    for (std::size_t k = 0; k < inner; ++k) {
      const double aik = arow[k];
      const double* brow = b.row(k).data();
      for (std::size_t j = 0; j < p; ++j) out[j] += aik * brow[j];
    }
  }
  meter.add_sm(static_cast<std::uint64_t>(n) * inner * p);
  return c;
}

Matrix transpose(const Matrix& a) {
  constexpr std::size_t kBlock = 32;
  Matrix t(a.cols(), a.rows());
  for (std::size_t i0 = 0; i0 < a.rows(); i0 += kBlock) {
    const std::size_t i1 = std::min(a.rows(), i0 + kBlock);
    for (std::size_t j0 = 0; j0 < a.cols(); j0 += kBlock) {
      const std::size_t j1 = std::min(a.cols(), j0 + kBlock);
      for (std::size_t i = i0; i < i1; ++i) {
        for (std::size_t j = j0; j < j1; ++j) t(j, i) = a(i, j);
      }
    }
  }
  return t;
}

Matrix inverse(const Matrix& a, CostMeter& meter) {
  if (!a.is_square()) throw ShapeError("inverse: matrix is " + shape_str(a));
  const std::size_t n = a.rows();
  Matrix w = a;

  std::vector<double> scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double x : a.row(i)) s = std::max(s, std::abs(x));
    scale[i] = s;
  }

  std::vector<std::size_t> swapped_with(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(w(r, col)) > std::abs(w(piv, col))) piv = r;
    }
    if (!(std::abs(w(piv, col)) > kSingularRelTol * scale[piv])) {
      throw SingularMatrixError("inverse: pivot below threshold at column " +
                                std::to_string(col));
    }
    if (piv != col) {
      std::swap_ranges(w.row(piv).begin(), w.row(piv).end(), w.row(col).begin());
      std::swap(scale[piv], scale[col]);
    }
    swapped_with[col] = piv;

    const double inv_pivot = 1.0 / w(col, col);
    w(col, col) = 1.0;
    double* prow = w.row(col).data();
    for (std::size_t j = 0; j < n; ++j) prow[j] *= inv_pivot;

    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double* rrow = w.row(r).data();
      const double factor = rrow[col];
      rrow[col] = 0.0;
      for (std::size_t j = 0; j < n; ++j) rrow[j] -= prow[j] * factor;
    }
  }
  meter.add_sm(static_cast<std::uint64_t>(n) * n * n);

  // Row swaps of the input become column swaps of the inverse, undone in reverse.
  for (std::size_t col = n; col-- > 0;) {
    const std::size_t other = swapped_with[col];
    if (other == col) continue;
    for (std::size_t r = 0; r < n; ++r) std::swap(w(r, col), w(r, other));
  }
  return w;
}

Vector mat_vec(const Matrix& a, const Vector& v, CostMeter& meter) {
  if (a.cols() != v.size()) {
    throw ShapeError("mat_vec: " + shape_str(a) + " times vector of length " +
                     std::to_string(v.size()));
  }
  Vector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto row = a.row(i);
    out[i] = std::inner_product(row.begin(), row.end(), v.data().begin(), 0.0);
  }
  meter.add_sm(static_cast<std::uint64_t>(a.rows()) * a.cols());
  return out;
}

Matrix random_matrix(std::uint64_t seed, std::size_t rows, std::size_t cols, double low,
                     double high) {
  if (!(low < high)) throw ParameterError("random_matrix: low must be below high");
  Rng rng(seed);
  std::vector<double> data(rows * cols);
  for (double& x : data) x = rng.uniform(low, high);
  return Matrix(rows, cols, std::move(data));
}

Vector random_vector(std::uint64_t seed, std::size_t len, double low, double high) {
  if (!(low < high)) throw ParameterError("random_vector: low must be below high");
  Rng rng(seed);
  std::vector<double> data(len);
  for (double& x : data) x = rng.uniform(low, high);
  return Vector(std::move(data));
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("max_abs_diff: " + shape_str(a) + " vs " + shape_str(b));
  }
  double best = 0.0;
  const auto x = a.data(), y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) best = std::max(best, std::abs(x[i] - y[i]));
  return best;
}

double max_abs_diff(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw ShapeError("max_abs_diff: vector lengths differ");
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::abs(a[i] - b[i]));
  return best;
}

std::size_t rank(const Matrix& a, double tol) {
  Matrix w = a;
  const std::size_t rows = w.rows(), cols = w.cols();
  double biggest = 0.0;
  for (double x : w.data()) biggest = std::max(biggest, std::abs(x));
  if (biggest == 0.0) return 0;

  std::vector<std::size_t> col_of(cols);
  std::iota(col_of.begin(), col_of.end(), 0);
  std::size_t r = 0;
  for (; r < std::min(rows, cols); ++r) {
    std::size_t pr = r, pc = r;
    for (std::size_t i = r; i < rows; ++i) {
      for (std::size_t j = r; j < cols; ++j) {
        if (std::abs(w(i, col_of[j])) > std::abs(w(pr, col_of[pc]))) {
          pr = i;
          pc = j;
        }
      }
    }
    if (std::abs(w(pr, col_of[pc])) <= tol * biggest) break;
    std::swap_ranges(w.row(pr).begin(), w.row(pr).end(), w.row(r).begin());
    std::swap(col_of[pc], col_of[r]);
    const double pivot = w(r, col_of[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      const double f = w(i, col_of[r]) / pivot;
      for (std::size_t j = r; j < cols; ++j) w(i, col_of[j]) -= f * w(r, col_of[j]);
    }
  }
  return r;
}

}  // namespace efp
