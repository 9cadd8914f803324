#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "nsbf/error.hpp"

namespace nsbf::cli {

// Malformed expression; column is 1-based into the source text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t column)
      : Error(message + " at column " + std::to_string(column)), column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// Arithmetic in one variable y: numbers, + - * / ^, unary minus, parentheses
/// and exp log sin cos sqrt. Immutable; copies share the tree.
class Expression {
 public:
  struct Node;

  static Expression parse(const std::string& text);

  double operator()(double y) const;
  /// Symbolic d/dy, lightly simplified.
  Expression derivative() const;
  std::string to_string() const;

  const std::string& source() const noexcept { return source_; }

 private:
  explicit Expression(std::shared_ptr<const Node> root, std::string source = {});

  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace nsbf::cli
