#pragma once

#include <span>

#include "exponent.hpp"
#include "matrix.hpp"

namespace vva {

// Source/target space parameters for the identity embedding between two
// mixed-norm sequence spaces on an N1 x N2 index grid. (p, u) describe
// the input space, (q, v) the output space.
struct SpacePair {
  std::size_t n1 = 1;
  std::size_t n2 = 1;
  Exponent p, u;  // outer / inner exponent of the input space
  Exponent q, v;  // outer / inner exponent of the output space
};

// Normalized power mean ((1/N) sum |x_i|^e)^(1/e); max |x_i| for e = inf.
// Rescales by the peak magnitude so large exponents cannot overflow.
double inner_norm(std::span<const double> row, Exponent u);

// Mixed norm: outer norm (exponent p, normalized over rows) of the vector
// of inner row norms (exponent u, normalized over columns).
double mixed_norm(const Matrix& f, Exponent p, Exponent u);

// Operator norm of the identity embedding:
// N1^((1/p - 1/q)+) * N2^((1/u - 1/v)+).
double embedding_norm(const SpacePair& sp);

}  // namespace vva
