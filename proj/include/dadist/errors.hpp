#pragma once

#include <stdexcept>
#include <string>

namespace dadist {

/// Input lies outside the open domain of an operation (non-PD matrix,
/// boundary point of a density support, pole of a special function, ...).
class domain_error : public std::runtime_error {
 public:
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

/// Structurally invalid configuration: mismatched dimensions, bad kernel
/// parameters for the instantiated dimension, malformed selection strings.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerically or exactly singular input where an inverse/rank is required.
class singular_error : public std::runtime_error {
 public:
  explicit singular_error(const std::string& what) : std::runtime_error(what) {}
};

/// Operation not defined for the requested algebra (octonionic matrix cases).
class unsupported_error : public std::runtime_error {
 public:
  explicit unsupported_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dadist
