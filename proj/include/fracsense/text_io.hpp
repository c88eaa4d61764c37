#pragma once

#include <iosfwd>
#include <string>

#include "fracsense/linalg.hpp"

namespace fracsense {

// Plain-text persistence.
//   matrix: first line "m n", then m lines of n space-separated decimals
//   vector: first line "n", then one line of n space-separated decimals
// Values are written with 17 significant digits, so reading back is exact.
// Malformed input raises ParseError carrying the 1-based line number.

void write_matrix(std::ostream& os, const Matrix& A);
void write_vector(std::ostream& os, const Vector& v);
Matrix read_matrix(std::istream& is);
Vector read_vector(std::istream& is);

void save_matrix(const std::string& path, const Matrix& A);
void save_vector(const std::string& path, const Vector& v);
Matrix load_matrix(const std::string& path);
Vector load_vector(const std::string& path);

}  // namespace fracsense
