#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hs {

// Raised when a query would push a phase counter, a budget scope or the
// ledger total past its cap. Nothing is charged when this is thrown.
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted(std::string limit, std::uint64_t cap)
      : std::runtime_error("query budget exhausted: " + limit + " (cap " +
                           std::to_string(cap) + ")"),
        limit_(std::move(limit)),
        cap_(cap) {}

  const std::string& limit() const noexcept { return limit_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::string limit_;
  std::uint64_t cap_;
};

class InvalidId : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A search was asked to locate a nonzero element inside a set that weighs zero.
class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hs
