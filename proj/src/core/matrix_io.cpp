#include "matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace vva {

Matrix read_matrix(std::istream& in) {
  std::size_t n1 = 0, n2 = 0;
  if (!(in >> n1 >> n2) || n1 == 0 || n2 == 0) {
    throw IoError("matrix header must be two positive integers \"N1 N2\"");
  }
  Matrix m(n1, n2);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      double x;
      if (!(in >> x)) {
        throw IoError("matrix body ended early at row " + std::to_string(i));
      }
      if (!std::isfinite(x)) {
        throw IoError("matrix entries must be finite");
      }
      m(i, j) = x;
    }
  }
  return m;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  char buf[40];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << buf << (j + 1 < m.cols() ? ' ' : '\n');
    }
  }
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_matrix(out, m);
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace vva
