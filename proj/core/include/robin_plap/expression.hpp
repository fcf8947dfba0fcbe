#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "robin_plap/quadrature.hpp"

namespace robin_plap {

/// Small arithmetic expression over the variables x, y, s1, s2.
///
/// Operators: + - * / ^ (right associative) and unary minus.
/// Functions: exp log tanh abs sqrt sin cos pow(a,b) min(a,b) max(a,b).
/// The constant `pi` and any caller-supplied named constants are
/// substituted at parse time. Evaluation is const and reentrant.
class Expression {
 public:
  using Constants = std::map<std::string, double, std::less<>>;

  /// Throws std::invalid_argument with the offending position on a syntax
  /// error or an unknown identifier.
  static Expression parse(std::string_view text, const Constants& constants = {});

  double evaluate(double x, double y, double s1, double s2) const;
  double operator()(const Point& p, double s1, double s2) const {
    return evaluate(p.x, p.y, s1, s2);
  }

  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace robin_plap
