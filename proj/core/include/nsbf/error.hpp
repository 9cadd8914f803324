#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nsbf {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Grid too small, not odd, or non-increasing endpoints.
class InvalidGridError : public Error {
 public:
  using Error::Error;
};

// Off-grid evaluation outside [a, b], or an argument outside a supported range.
class DomainError : public Error {
 public:
  using Error::Error;
};

// p or r not strictly positive at some node.
class PositivityError : public Error {
 public:
  PositivityError(const std::string& what, std::size_t node, double y)
      : Error(what), node_(node), y_(y) {}
  std::size_t node() const noexcept { return node_; }
  double y() const noexcept { return y_; }

 private:
  std::size_t node_;
  double y_;
};

// Overflow in a recursive ladder or a refused request beyond an internal cap.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Non-finite values, failed certificates, integrator breakdown.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace nsbf
