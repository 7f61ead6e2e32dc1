#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "matrix.hpp"

namespace vva {

// Thrown when a budgeted oracle would exceed its query allowance.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(std::uint64_t budget, std::uint64_t attempted)
      : std::runtime_error("query budget exceeded: attempted query " +
                           std::to_string(attempted) + " with budget " +
                           std::to_string(budget)),
        budget_(budget),
        attempted_(attempted) {}

  std::uint64_t budget() const { return budget_; }
  std::uint64_t attempted_count() const { return attempted_; }

 private:
  std::uint64_t budget_;
  std::uint64_t attempted_;
};

// Point-evaluation access to a hidden input matrix with exact query
// accounting. Every call to query() costs one unit, including repeated
// reads of the same cell. An oracle is owned by a single algorithm run;
// distinct oracles may be used concurrently.
class InfoOracle {
 public:
  explicit InfoOracle(const Matrix& target,
                      std::optional<std::uint64_t> budget = std::nullopt)
      : target_(&target), budget_(budget) {}

  double query(std::size_t i, std::size_t j) {
    target_->check_index(i, j);
    if (budget_ && count_ + 1 > *budget_) {
      throw BudgetError(*budget_, count_ + 1);
    }
    ++count_;
    return (*target_)(i, j);
  }

  std::uint64_t count() const { return count_; }
  std::optional<std::uint64_t> budget() const { return budget_; }

  std::size_t rows() const { return target_->rows(); }
  std::size_t cols() const { return target_->cols(); }

 private:
  const Matrix* target_;
  std::uint64_t count_ = 0;
  std::optional<std::uint64_t> budget_;
};

}  // namespace vva
