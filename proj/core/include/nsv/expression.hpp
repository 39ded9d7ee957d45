#pragma once

#include <array>
#include <memory>
#include <string>

#include "nsv/fields.hpp"

namespace nsv {

/// Value with derivatives with respect to x, y, z.
struct Dual {
  double v = 0.0;
  std::array<double, 3> d{0.0, 0.0, 0.0};
};

/// Arithmetic expression in x, y, z, t with + - * / ^, unary minus,
/// parentheses, sin, cos, exp and the constant pi. Immutable once parsed.
class Expression {
 public:
  /// Throws ParseError with the column in the message.
  explicit Expression(const std::string& text);

  double operator()(const Point& x, double t) const;
  /// Value and spatial gradient by forward differentiation.
  Dual dual(const Point& x, double t) const;

  const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

/// Vector field from one expression per component; missing components are
/// zero. Gradients come from forward differentiation.
TimeVelocityField make_vector_field(const std::vector<Expression>& components);

}  // namespace nsv
