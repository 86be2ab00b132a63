#include "efp/masking.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numeric>
#include <string>
#include <vector>

#include "efp/errors.hpp"
#include "efp/rng.hpp"

namespace efp {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_op_fits(const ElementaryOp& op, std::size_t n, const char* where) {
  const std::size_t dim = op_dimension(op);
  if (dim != 0 && dim != n) {
    throw ShapeError(std::string(where) + ": op of size " + std::to_string(dim) +
                     " applied along a dimension of " + std::to_string(n));
  }
  if (const auto* add = std::get_if<AddMultiple>(&op); add && (add->src >= n || add->dst >= n)) {
    throw ShapeError(std::string(where) + ": add index out of range");
  }
}

void validate_op(const ElementaryOp& op, std::size_t n, bool strict) {
  std::visit(Overloaded{
                 [&](const ScaleAll& s) {
                   if (s.factors.size() != n) throw ParameterError("scale op size mismatch");
                   for (double f : s.factors) {
                     if (!std::isfinite(f)) throw ParameterError("non-finite scale factor");
                     if (strict && f == 0.0) throw ParameterError("zero scale factor");
                   }
                 },
                 [&](const Permute& p) {
                   if (p.perm.size() != n) throw ParameterError("permutation size mismatch");
                   std::vector<bool> seen(n, false);
                   for (std::size_t v : p.perm) {
                     if (v >= n || seen[v]) throw ParameterError("permutation is not a bijection");
                     seen[v] = true;
                   }
                 },
                 [&](const AddMultiple& a) {
                   if (a.src >= n || a.dst >= n) throw ParameterError("add index out of range");
                   if (a.src == a.dst) throw ParameterError("add op needs src != dst");
                   if (!std::isfinite(a.scalar)) throw ParameterError("non-finite add scalar");
                   if (strict && a.scalar == 0.0) throw ParameterError("zero add scalar");
                 },
             },
             op);
}

void validate_side(const std::vector<ElementaryOp>& ops, std::size_t n, bool strict) {
  for (const auto& op : ops) validate_op(op, n, strict);
  if (!strict) return;
  if (ops.size() < kMinOpsPerSide) {
    throw ParameterError("a key needs at least " + std::to_string(kMinOpsPerSide) +
                         " ops per side");
  }
  if (!std::holds_alternative<ScaleAll>(ops[0])) throw ParameterError("first op must scale");
  if (!std::holds_alternative<Permute>(ops[1])) throw ParameterError("second op must permute");
  for (std::size_t i = 2; i < ops.size(); ++i) {
    if (!std::holds_alternative<AddMultiple>(ops[i])) {
      throw ParameterError("ops after the permutation must be add ops");
    }
  }
}

double key_scalar(Rng& rng) {
  const double magnitude = rng.uniform(kKeyScalarMin, kKeyScalarMax);
  return rng.coin() ? -magnitude : magnitude;
}

std::vector<ElementaryOp> draw_side(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<ElementaryOp> ops;
  ops.reserve(k);

  ScaleAll scale;
  scale.factors.resize(n);
  for (double& f : scale.factors) f = key_scalar(rng);
  ops.emplace_back(std::move(scale));

  Permute perm;
  perm.perm.resize(n);
  std::iota(perm.perm.begin(), perm.perm.end(), std::size_t{0});
  for (std::size_t i = n - 1; i > 0; --i) std::swap(perm.perm[i], perm.perm[rng.below(i + 1)]);
  ops.emplace_back(std::move(perm));

  for (std::size_t i = 2; i < k; ++i) {
    AddMultiple add;
    add.src = rng.below(n);
    add.dst = rng.below(n - 1);
    if (add.dst >= add.src) ++add.dst;
    add.scalar = key_scalar(rng);
    ops.emplace_back(add);
  }
  return ops;
}

nlohmann::json op_to_json(const ElementaryOp& op) {
  return std::visit(
      Overloaded{
          [](const ScaleAll& s) {
            return nlohmann::json{{"kind", "scale_all"}, {"factors", s.factors}};
          },
          [](const Permute& p) { return nlohmann::json{{"kind", "permute"}, {"perm", p.perm}}; },
          [](const AddMultiple& a) {
            return nlohmann::json{
                {"kind", "add_multiple"}, {"src", a.src}, {"dst", a.dst}, {"scalar", a.scalar}};
          },
      },
      op);
}

ElementaryOp op_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "scale_all") return ScaleAll{j.at("factors").get<std::vector<double>>()};
  if (kind == "permute") return Permute{j.at("perm").get<std::vector<std::size_t>>()};
  if (kind == "add_multiple") {
    return AddMultiple{j.at("src").get<std::size_t>(), j.at("dst").get<std::size_t>(),
                       j.at("scalar").get<double>()};
  }
  throw FormatError("unknown op kind '" + kind + "'");
}

}  // namespace

std::size_t op_dimension(const ElementaryOp& op) {
  return std::visit(Overloaded{
                        [](const ScaleAll& s) { return s.factors.size(); },
                        [](const Permute& p) { return p.perm.size(); },
                        [](const AddMultiple&) { return std::size_t{0}; },
                    },
                    op);
}

Matrix explicit_matrix(const ElementaryOp& op, std::size_t n) {
  validate_op(op, n, false);
  Matrix e(n, n);
  std::visit(Overloaded{
                 [&](const ScaleAll& s) {
                   for (std::size_t i = 0; i < n; ++i) e(i, i) = s.factors[i];
                 },
                 [&](const Permute& p) {
                   for (std::size_t i = 0; i < n; ++i) e(i, p.perm[i]) = 1.0;
                 },
                 [&](const AddMultiple& a) {
                   for (std::size_t i = 0; i < n; ++i) e(i, i) = 1.0;
                   e(a.src, a.dst) = a.scalar;
                 },
             },
             op);
  return e;
}

Matrix apply_column_op(Matrix x, const ElementaryOp& op, CostMeter& meter) {
  check_op_fits(op, x.cols(), "apply_column_op");
  const std::size_t rows = x.rows(), cols = x.cols();
  return std::visit(Overloaded{
                        [&](const ScaleAll& s) {
                          for (std::size_t r = 0; r < rows; ++r) {
                            auto row = x.row(r);
                            for (std::size_t c = 0; c < cols; ++c) row[c] *= s.factors[c];
                          }
                          meter.add_sm(static_cast<std::uint64_t>(rows) * cols);
                          return std::move(x);
                        },
                        [&](const Permute& p) {
                          std::vector<double> scratch(cols);
                          for (std::size_t r = 0; r < rows; ++r) {
                            auto row = x.row(r);
                            std::copy(row.begin(), row.end(), scratch.begin());
                            for (std::size_t c = 0; c < cols; ++c) row[p.perm[c]] = scratch[c];
                          }
                          meter.add_as(static_cast<std::uint64_t>(rows) * cols);
                          return std::move(x);
                        },
                        [&](const AddMultiple& a) {
                          for (std::size_t r = 0; r < rows; ++r) x(r, a.dst) += a.scalar * x(r, a.src);
                          meter.add_sm(rows);
                          return std::move(x);
                        },
                    },
                    op);
}

Matrix apply_row_op(Matrix x, const ElementaryOp& op, CostMeter& meter) {
  check_op_fits(op, x.rows(), "apply_row_op");
  const std::size_t rows = x.rows(), cols = x.cols();
  return std::visit(Overloaded{
                        [&](const ScaleAll& s) {
                          for (std::size_t r = 0; r < rows; ++r) {
                            for (double& v : x.row(r)) v *= s.factors[r];
                          }
                          meter.add_sm(static_cast<std::uint64_t>(rows) * cols);
                          return std::move(x);
                        },
                        [&](const Permute& p) {
                          // Walk each cycle once, carrying a single row in scratch.
                          std::vector<double> scratch(cols);
                          std::vector<bool> done(rows, false);
                          for (std::size_t start = 0; start < rows; ++start) {
                            if (done[start] || p.perm[start] == start) continue;
                            auto first = x.row(start);
                            std::copy(first.begin(), first.end(), scratch.begin());
                            std::size_t r = start;
                            while (p.perm[r] != start) {
                              const auto src = x.row(p.perm[r]);
                              std::copy(src.begin(), src.end(), x.row(r).begin());
                              done[r] = true;
                              r = p.perm[r];
                            }
                            std::copy(scratch.begin(), scratch.end(), x.row(r).begin());
                            done[r] = true;
                          }
                          meter.add_as(static_cast<std::uint64_t>(rows) * cols);
                          return std::move(x);
                        },
                        [&](const AddMultiple& a) {
                          auto target = x.row(a.src);
                          const auto source = x.row(a.dst);
                          for (std::size_t c = 0; c < cols; ++c) target[c] += a.scalar * source[c];
                          meter.add_sm(cols);
                          return std::move(x);
                        },
                    },
                    op);
}

SecretKey::SecretKey(std::size_t n, std::vector<ElementaryOp> p_ops,
                     std::vector<ElementaryOp> q_ops)
    : SecretKey(n, std::move(p_ops), std::move(q_ops), false) {}

SecretKey SecretKey::unsafe_for_privacy_testing(std::size_t n, std::vector<ElementaryOp> p_ops,
                                                std::vector<ElementaryOp> q_ops) {
  return SecretKey(n, std::move(p_ops), std::move(q_ops), true);
}

SecretKey::SecretKey(std::size_t n, std::vector<ElementaryOp> p_ops,
                     std::vector<ElementaryOp> q_ops, bool unsafe)
    : n_(n), p_ops_(std::move(p_ops)), q_ops_(std::move(q_ops)), unsafe_(unsafe) {
  if (n_ == 0) throw ParameterError("key dimension must be positive");
  validate_side(p_ops_, n_, !unsafe_);
  validate_side(q_ops_, n_, !unsafe_);
  if (!unsafe_ && p_ops_.size() != q_ops_.size()) {
    throw ParameterError("both key sides must have k ops");
  }
}

MaskedProblem::MaskedProblem(Matrix x1, Matrix x2) : x1_(std::move(x1)), x2_(std::move(x2)) {
  if (x1_.rows() != x2_.cols() || x1_.cols() != x2_.rows()) {
    throw ShapeError("masked pair must be m x n and n x m");
  }
}

SecretKey keygen(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (n < 2) throw ParameterError("keygen: n must be at least 2");
  if (k < kMinOpsPerSide) throw ParameterError("keygen: k must be at least 4");
  Rng rng(seed);
  auto p_ops = draw_side(n, k, rng);
  auto q_ops = draw_side(n, k, rng);
  return SecretKey(n, std::move(p_ops), std::move(q_ops));
}

MaskedProblem probgen(const Matrix& x, const SecretKey& sk, CostMeter& meter) {
  if (x.cols() != sk.n()) {
    throw ShapeError("probgen: matrix has " + std::to_string(x.cols()) +
                     " columns, key expects " + std::to_string(sk.n()));
  }
  const std::size_t m = x.rows(), n = x.cols();
  const auto& p_ops = sk.p_ops();
  const auto& q_ops = sk.q_ops();

  // A leading scale op is folded into the copy (x1) and into the transpose
  // (x2), saving one pass over each matrix. Counts are unchanged.
  const auto* p_scale = p_ops.empty() ? nullptr : std::get_if<ScaleAll>(&p_ops.front());
  const auto* q_scale = q_ops.empty() ? nullptr : std::get_if<ScaleAll>(&q_ops.front());

  Matrix x1(m, n);
  if (p_scale) {
    for (std::size_t r = 0; r < m; ++r) {
      const auto in = x.row(r);
      auto out = x1.row(r);
      for (std::size_t c = 0; c < n; ++c) out[c] = in[c] * p_scale->factors[c];
    }
    meter.add_sm(static_cast<std::uint64_t>(m) * n);
  } else {
    std::copy(x.data().begin(), x.data().end(), x1.data().begin());
  }
  for (std::size_t i = p_scale ? 1 : 0; i < p_ops.size(); ++i) {
    x1 = apply_column_op(std::move(x1), p_ops[i], meter);
  }

  Matrix x2(n, m);
  constexpr std::size_t kBlock = 32;
  for (std::size_t i0 = 0; i0 < m; i0 += kBlock) {
    const std::size_t i1 = std::min(m, i0 + kBlock);
    for (std::size_t j0 = 0; j0 < n; j0 += kBlock) {
      const std::size_t j1 = std::min(n, j0 + kBlock);
      for (std::size_t i = i0; i < i1; ++i) {
        for (std::size_t j = j0; j < j1; ++j) {
          x2(j, i) = q_scale ? x(i, j) * q_scale->factors[j] : x(i, j);
        }
      }
    }
  }
  if (q_scale) meter.add_sm(static_cast<std::uint64_t>(m) * n);
  for (std::size_t i = q_scale ? 1 : 0; i < q_ops.size(); ++i) {
    x2 = apply_row_op(std::move(x2), q_ops[i], meter);
  }
  return MaskedProblem(std::move(x1), std::move(x2));
}

Recovered recover(const SecretKey& sk, const Matrix& r_prime, const Vector& y,
                  CostMeter& meter) {
  if (r_prime.rows() != sk.n()) throw ShapeError("recover: result row count differs from key");
  if (r_prime.cols() != y.size()) throw ShapeError("recover: y length differs from result");
  Matrix r = r_prime;
  const auto& ops = sk.p_ops();
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) r = apply_row_op(std::move(r), *it, meter);
  Vector weights = mat_vec(r, y, meter);
  return {std::move(r), std::move(weights)};
}

Vector recover_weights_fast(const SecretKey& sk, const Matrix& r_prime, const Vector& y,
                            CostMeter& meter) {
  if (r_prime.rows() != sk.n()) throw ShapeError("recover: result row count differs from key");
  const Vector ry = mat_vec(r_prime, y, meter);
  Matrix column(ry.size(), 1, std::vector<double>(ry.data().begin(), ry.data().end()));
  const auto& ops = sk.p_ops();
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    column = apply_row_op(std::move(column), *it, meter);
  }
  return Vector(std::vector<double>(column.data().begin(), column.data().end()));
}

std::string key_to_json(const SecretKey& sk) {
  nlohmann::json j;
  j["n"] = sk.n();
  j["k"] = sk.k();
  auto& p = j["p_ops"] = nlohmann::json::array();
  for (const auto& op : sk.p_ops()) p.push_back(op_to_json(op));
  auto& q = j["q_ops"] = nlohmann::json::array();
  for (const auto& op : sk.q_ops()) q.push_back(op_to_json(op));
  if (sk.unsafe_for_privacy()) j["unsafe_for_privacy"] = true;
  return j.dump(1) + "\n";
}

SecretKey key_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto n = j.at("n").get<std::size_t>();
    const auto k = j.at("k").get<std::size_t>();
    std::vector<ElementaryOp> p, q;
    for (const auto& op : j.at("p_ops")) p.push_back(op_from_json(op));
    for (const auto& op : j.at("q_ops")) q.push_back(op_from_json(op));
    if (p.size() != k) throw FormatError("key field k disagrees with p_ops length");
    if (j.value("unsafe_for_privacy", false)) {
      return SecretKey::unsafe_for_privacy_testing(n, std::move(p), std::move(q));
    }
    return SecretKey(n, std::move(p), std::move(q));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("key json: ") + e.what());
  }
}

}  // namespace efp
