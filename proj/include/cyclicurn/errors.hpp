#pragma once

#include <stdexcept>
#include <string>

namespace cyclicurn {

/// Invalid parameters (type count, index ranges, malformed input).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation requested outside its mathematical domain, e.g. a martingale
/// limit for a projection with lambda_k <= 1/2.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exact enumeration or allocation would exceed the configured size guard.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cyclicurn
