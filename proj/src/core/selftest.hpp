#pragma once

#include <cstdint>
#include <iosfwd>

namespace vva {

// Fast cross-module invariant suite backing the `selftest` CLI command.
// Prints one line per check when verbose and returns the number of failed
// checks (0 means everything held).
int selftest(std::uint64_t seed, bool verbose, std::ostream& out);

}  // namespace vva
