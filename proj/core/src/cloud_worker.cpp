#include "efp/cloud_worker.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "efp/errors.hpp"

namespace efp {

Matrix compute(const MaskedProblem& mp, CostMeter& meter) {
  const Matrix normal = mat_mul(mp.x2(), mp.x1(), meter);
  const Matrix normal_inv = inverse(normal, meter);
  return mat_mul(normal_inv, mp.x2(), meter);
}

Matrix compute_with_behavior(const MaskedProblem& mp, const CloudBehavior& behavior,
                             CostMeter& meter) {
  if (const auto* random = std::get_if<RandomResult>(&behavior)) {
    return random_matrix(random->seed, mp.n(), mp.m(), -1.0, 1.0);
  }
  if (const auto* perturb = std::get_if<PerturbOne>(&behavior)) {
    if (perturb->delta == 0.0) throw ParameterError("perturbation delta must be non-zero");
    if (perturb->row >= mp.n() || perturb->col >= mp.m()) {
      throw ParameterError("perturbation position outside the result");
    }
  }
  if (const auto* trunc = std::get_if<Truncated>(&behavior)) {
    if (trunc->keep_rows == 0 || trunc->keep_rows >= mp.n()) {
      throw ParameterError("truncation must keep between 1 and n-1 rows");
    }
  }

  Matrix result = compute(mp, meter);

  if (const auto* perturb = std::get_if<PerturbOne>(&behavior)) {
    result(perturb->row, perturb->col) += perturb->delta;
  } else if (const auto* trunc = std::get_if<Truncated>(&behavior)) {
    const auto all = result.data();
    std::vector<double> kept(all.begin(), all.begin() + trunc->keep_rows * result.cols());
    return Matrix(trunc->keep_rows, result.cols(), std::move(kept));
  }
  return result;
}

}  // namespace efp
