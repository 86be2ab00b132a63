#pragma once

// Reference computations for tests. Nothing here calls into the library's
// arithmetic; everything works on plain nested vectors.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "efp/matrix.hpp"

namespace efp::oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense to_dense(const Matrix& m) {
  Dense d(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) d[i][j] = m(i, j);
  }
  return d;
}

inline Matrix from_dense(const Dense& d) {
  std::vector<double> flat;
  for (const auto& row : d) flat.insert(flat.end(), row.begin(), row.end());
  return Matrix(d.size(), d.front().size(), std::move(flat));
}

inline Dense multiply(const Dense& a, const Dense& b) {
  Dense c(a.size(), std::vector<double>(b.front().size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.front().size(); ++j) {
      long double s = 0.0L;
      for (std::size_t k = 0; k < b.size(); ++k) s += static_cast<long double>(a[i][k]) * b[k][j];
      c[i][j] = static_cast<double>(s);
    }
  }
  return c;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  return from_dense(multiply(to_dense(a), to_dense(b)));
}

/// Least squares weights by Cholesky factorisation of X^T X, in long double.
inline std::vector<double> normal_equations_cholesky(const Matrix& x, const std::vector<double>& y) {
  const std::size_t m = x.rows(), n = x.cols();
  std::vector<std::vector<long double>> g(n, std::vector<long double>(n, 0.0L));
  std::vector<long double> b(n, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t r = 0; r < m; ++r) g[i][j] += static_cast<long double>(x(r, i)) * x(r, j);
    }
    for (std::size_t r = 0; r < m; ++r) b[i] += static_cast<long double>(x(r, i)) * y[r];
  }
  for (std::size_t j = 0; j < n; ++j) {
    long double d = g[j][j];
    for (std::size_t k = 0; k < j; ++k) d -= g[j][k] * g[j][k];
    if (d <= 0) throw std::runtime_error("oracle: Gram matrix not positive definite");
    g[j][j] = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      long double s = g[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= g[i][k] * g[j][k];
      g[i][j] = s / g[j][j];
    }
  }
  std::vector<long double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    long double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= g[i][k] * z[k];
    z[i] = s / g[i][i];
  }
  std::vector<long double> wl(n);
  for (std::size_t i = n; i-- > 0;) {
    long double s = z[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= g[k][i] * wl[k];
    wl[i] = s / g[i][i];
  }
  return std::vector<double>(wl.begin(), wl.end());
}

/// (X^T X)^-1 X^T via a long double Cholesky factorisation of X^T X.
inline Matrix left_pseudo_inverse(const Matrix& x) {
  const std::size_t m = x.rows(), n = x.cols();
  std::vector<double> flat(n * m);
  for (std::size_t col = 0; col < m; ++col) {
    std::vector<double> e(m, 0.0);
    e[col] = 1.0;
    const auto w = normal_equations_cholesky(x, e);
    for (std::size_t i = 0; i < n; ++i) flat[i * m + col] = w[i];
  }
  return Matrix(n, m, std::move(flat));
}

inline double max_abs(const std::vector<double>& v) {
  double best = 0.0;
  for (double x : v) best = std::max(best, std::abs(x));
  return best;
}

inline double rel_error(const std::vector<double>& got, const std::vector<double>& want) {
  double diff = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) diff = std::max(diff, std::abs(got[i] - want[i]));
  return diff / std::max(max_abs(want), 1e-300);
}

}  // namespace efp::oracle
