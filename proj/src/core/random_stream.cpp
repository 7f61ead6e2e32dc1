#include "random_stream.hpp"

#include <stdexcept>

namespace vva {

namespace {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t master_seed, std::string_view label,
                           std::uint64_t index) {
  std::uint64_t h = mix64(master_seed);
  for (unsigned char c : label) {
    h = mix64(h ^ static_cast<std::uint64_t>(c));
  }
  // Length folded in so "ab"/"" and "a"/"b" cannot collide.
  h = mix64(h ^ static_cast<std::uint64_t>(label.size()));
  state_ = mix64(h ^ index);
}

std::uint64_t RandomStream::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double RandomStream::next_real() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::uniform_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: n must be >= 1");
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % n;
  }
}

int RandomStream::sign() { return (next_u64() & 1u) ? 1 : -1; }

}  // namespace vva
