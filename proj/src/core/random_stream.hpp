#pragma once

#include <cstdint>
#include <string_view>

namespace vva {

// Deterministic random stream derived from (master_seed, label, index).
// Identical triples give byte-identical sequences on every platform;
// distinct (label, index) pairs give statistically independent streams.
// Derivation is counter-based, so trials can be scheduled in any order
// or on any thread without perturbing each other's draws.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::string_view label,
               std::uint64_t index);

  std::uint64_t next_u64();

  // Uniform real in [0, 1).
  double next_real();

  // Uniform integer in {0, ..., n-1}; unbiased via rejection.
  std::uint64_t uniform_below(std::uint64_t n);

  // Uniform sign in {-1, +1}.
  int sign();

 private:
  std::uint64_t state_;
};

}  // namespace vva
