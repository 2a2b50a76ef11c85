#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace twosex {

/// Invalid parameters or inputs that violate an operation's preconditions.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The process is not subcritical (mean female offspring or growth rate >= 1).
class OutOfScopeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An unbounded offspring support cannot be enumerated within the allowed cap.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, std::int64_t required_cap, std::int64_t cap)
      : std::runtime_error(what), required_cap_(required_cap), cap_(cap) {}

  std::int64_t required_cap() const noexcept { return required_cap_; }
  std::int64_t cap() const noexcept { return cap_; }

 private:
  std::int64_t required_cap_;
  std::int64_t cap_;
};

}  // namespace twosex
