#pragma once

#include <stdexcept>
#include <string>

namespace uent {

// Raised for invalid configuration or violated operation preconditions.
// The CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a mathematically well-posed query is asked outside its domain
// (point off a leaf, rho outside [0,1], level outside the achievable range).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace uent
