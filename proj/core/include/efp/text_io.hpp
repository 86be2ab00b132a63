#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "efp/matrix.hpp"

namespace efp {

// Matrix text: "m n\n" then m lines of n space-separated numbers.
// Vector text: "n\n" then one line of n numbers.
// Numbers use the shortest representation that round-trips exactly.

std::string format_matrix(const Matrix& m);
Matrix parse_matrix(std::string_view text);

std::string format_vector(const Vector& v);
Vector parse_vector(std::string_view text);

/// Shortest round-trip decimal form of `x`.
std::string format_scalar(double x);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace efp
