#pragma once

#include <stdexcept>
#include <string>

namespace oscent {

/// Bad shapes, sizes, or out-of-range parameters passed by the caller.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mathematical function was evaluated outside its domain (x < 1 in f_eps, eps outside (0,1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A matrix that must be positive definite (or invertible) is not, within tolerance.
class DegenerateMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A theorem hypothesis does not hold for the given geometry (e.g. |L0|^2 > |L|).
class HypothesisViolated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Not enough usable data to produce a statistical fit.
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oscent
