#include "efp/protocol.hpp"

#include "efp/errors.hpp"

namespace efp {

Vector local_solve(const Matrix& x, const Vector& y, CostMeter& meter) {
  if (x.rows() != y.size()) throw ShapeError("local_solve: y length differs from row count");
  const Matrix xt = transpose(x);
  const Matrix gram_inv = inverse(mat_mul(xt, x, meter), meter);
  return mat_vec(mat_mul(gram_inv, xt, meter), y, meter);
}

}  // namespace efp
