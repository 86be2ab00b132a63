#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "efp/matrix.hpp"

namespace efp {

/// Multiply every row/column i by factors[i] (a diagonal elementary matrix).
struct ScaleAll {
  std::vector<double> factors;
  friend bool operator==(const ScaleAll&, const ScaleAll&) = default;
};

/// Permutation matrix E with E[i][perm[i]] = 1 (0-based indices).
///
/// As a column op (X * E) column i moves to column perm[i].
/// As a row op (E * X) row i receives row perm[i].
struct Permute {
  std::vector<std::size_t> perm;
  friend bool operator==(const Permute&, const Permute&) = default;
};

/// Identity plus `scalar` at E[src][dst] (0-based, src != dst).
///
/// As a column op (X * E): column dst += scalar * column src.
/// As a row op (E * X):    row src    += scalar * row dst.
struct AddMultiple {
  std::size_t src = 0;
  std::size_t dst = 0;
  double scalar = 0.0;
  friend bool operator==(const AddMultiple&, const AddMultiple&) = default;
};

using ElementaryOp = std::variant<ScaleAll, Permute, AddMultiple>;

/// Dimension n the op acts on; AddMultiple has no intrinsic size and returns 0.
std::size_t op_dimension(const ElementaryOp& op);

/// The n x n elementary matrix the op stands for.
Matrix explicit_matrix(const ElementaryOp& op, std::size_t n);

/// x * E applied directly; scale and add ops work in place on the moved-in x.
///   ScaleAll:    rows*cols SM
///   Permute:     rows*cols AS
///   AddMultiple: rows SM
Matrix apply_column_op(Matrix x, const ElementaryOp& op, CostMeter& meter);

/// E * x applied directly; scale and add ops work in place on the moved-in x.
///   ScaleAll:    rows*cols SM
///   Permute:     rows*cols AS
///   AddMultiple: cols SM
Matrix apply_row_op(Matrix x, const ElementaryOp& op, CostMeter& meter);

inline constexpr std::size_t kMinOpsPerSide = 4;
inline constexpr std::size_t kDefaultOpsPerSide = 8;
inline constexpr double kKeyScalarMin = 0.5;
inline constexpr double kKeyScalarMax = 2.0;

/// The client's secret: k elementary ops for each side of the design matrix.
///
/// Regular keys have the layout [ScaleAll, Permute, AddMultiple x (k-2)] on
/// both sides, non-zero scale factors and add scalars, and k >= 4.
class SecretKey {
 public:
  /// Validates the full structure; throws ParameterError on any violation.
  SecretKey(std::size_t n, std::vector<ElementaryOp> p_ops, std::vector<ElementaryOp> q_ops);

  /// Builds a key that only has to be dimensionally consistent: any op kinds,
  /// any order, zero scalars allowed, k may be below 4. Such keys are marked
  /// unsafe_for_privacy() and exist to build hand-checkable instances.
  static SecretKey unsafe_for_privacy_testing(std::size_t n, std::vector<ElementaryOp> p_ops,
                                              std::vector<ElementaryOp> q_ops);

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] std::size_t k() const noexcept { return p_ops_.size(); }
  [[nodiscard]] const std::vector<ElementaryOp>& p_ops() const noexcept { return p_ops_; }
  [[nodiscard]] const std::vector<ElementaryOp>& q_ops() const noexcept { return q_ops_; }
  [[nodiscard]] bool unsafe_for_privacy() const noexcept { return unsafe_; }

  friend bool operator==(const SecretKey&, const SecretKey&) = default;

 private:
  SecretKey(std::size_t n, std::vector<ElementaryOp> p_ops, std::vector<ElementaryOp> q_ops,
            bool unsafe);

  std::size_t n_;
  std::vector<ElementaryOp> p_ops_;
  std::vector<ElementaryOp> q_ops_;
  bool unsafe_ = false;
};

/// The public pair shipped to the worker: x1 (m x n) and x2 (n x m).
class MaskedProblem {
 public:
  MaskedProblem(Matrix x1, Matrix x2);

  [[nodiscard]] const Matrix& x1() const noexcept { return x1_; }
  [[nodiscard]] const Matrix& x2() const noexcept { return x2_; }
  [[nodiscard]] std::size_t m() const noexcept { return x1_.rows(); }
  [[nodiscard]] std::size_t n() const noexcept { return x1_.cols(); }

 private:
  Matrix x1_;
  Matrix x2_;
};

/// Draws a key from `seed`. Scale factors and add scalars have magnitude
/// uniform in [0.5, 2.0] with a random sign; add pairs are uniform over
/// ordered (src, dst) with src != dst, repeats across ops allowed.
/// Throws ParameterError for n < 2 or k < 4.
SecretKey keygen(std::size_t n, std::size_t k, std::uint64_t seed);

/// x1 = x P1 P2 ... Pk (P1 applied first), x2 = Qk ... Q2 Q1 x^T (Q1 applied first).
MaskedProblem probgen(const Matrix& x, const SecretKey& sk, CostMeter& meter);

struct Recovered {
  Matrix r;        ///< P1 P2 ... Pk R', i.e. (X^T X)^-1 X^T for an honest R'
  Vector weights;  ///< r * y
};

/// Applies Pk first and P1 last as row ops on r_prime, then multiplies by y.
Recovered recover(const SecretKey& sk, const Matrix& r_prime, const Vector& y, CostMeter& meter);

/// Weights only: P1 ... Pk (R' y). Cheaper, same result within rounding.
Vector recover_weights_fast(const SecretKey& sk, const Matrix& r_prime, const Vector& y,
                            CostMeter& meter);

/// Lossless JSON: {"n", "k", "p_ops", "q_ops"} with ops tagged by "kind".
std::string key_to_json(const SecretKey& sk);
SecretKey key_from_json(const std::string& text);

}  // namespace efp
