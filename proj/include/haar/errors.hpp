#pragma once

#include <stdexcept>
#include <string>

namespace haar {

// Shape or size mismatch between operands.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// Argument outside the mathematical domain of an operation (p < 1, d = 1, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A desk-scale size cap would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace haar
