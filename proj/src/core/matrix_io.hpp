#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "matrix.hpp"

namespace vva {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text matrix format: first line "N1 N2", then N1 whitespace-separated
// rows of N2 decimal reals.
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const Matrix& m);
void write_matrix_file(const std::string& path, const Matrix& m);

}  // namespace vva
