#pragma once

#include "efp/matrix.hpp"

namespace efp {

/// Unoutsourced baseline: (X^T X)^-1 X^T y evaluated in that order.
/// Throws SingularMatrixError when X lacks full column rank.
Vector local_solve(const Matrix& x, const Vector& y, CostMeter& meter);

}  // namespace efp
