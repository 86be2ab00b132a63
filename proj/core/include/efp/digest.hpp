#pragma once

#include <string>
#include <string_view>

#include "efp/masking.hpp"
#include "efp/matrix.hpp"

namespace efp {

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);

/// SHA-256 of the matrix text form.
std::string matrix_digest(const Matrix& m);

/// SHA-256 of the x1 text form followed by the x2 text form.
std::string problem_digest(const MaskedProblem& mp);

}  // namespace efp
