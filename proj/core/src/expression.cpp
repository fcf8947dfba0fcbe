#include "robin_plap/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace robin_plap {

struct Expression::Node {
  enum class Kind { number, variable, negate, binary, call };
  enum class Func { exp, log, tanh, abs, sqrt, sin, cos, pow, min, max };

  Kind kind = Kind::number;
  double value = 0.0;
  int variable = 0;  // 0:x 1:y 2:s1 3:s2
  char op = 0;
  Func func = Func::exp;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

struct FunctionInfo {
  std::string_view name;
  Node::Func func;
  int arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"exp", Node::Func::exp, 1},   {"log", Node::Func::log, 1},   {"tanh", Node::Func::tanh, 1},
    {"abs", Node::Func::abs, 1},   {"sqrt", Node::Func::sqrt, 1}, {"sin", Node::Func::sin, 1},
    {"cos", Node::Func::cos, 1},   {"pow", Node::Func::pow, 2},   {"min", Node::Func::min, 2},
    {"max", Node::Func::max, 2},
};

class Parser {
 public:
  Parser(std::string_view text, const Expression::Constants& constants)
      : text_(text), constants_(constants) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected character");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression '" + std::string(text_) + "': " + what +
                                " at position " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(char op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::binary;
    n->op = op;
    n->args = {std::move(a), std::move(b)};
    return n;
  }

  NodePtr expr() {
    NodePtr left = term();
    for (;;) {
      if (accept('+')) left = binary('+', left, term());
      else if (accept('-')) left = binary('-', left, term());
      else return left;
    }
  }

  NodePtr term() {
    NodePtr left = unary();
    for (;;) {
      if (accept('*')) left = binary('*', left, unary());
      else if (accept('/')) left = binary('/', left, unary());
      else return left;
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::negate;
      n->args = {unary()};
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return binary('^', base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (accept('(')) {
      NodePtr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected character");
  }

  NodePtr number() {
    const std::string rest(text_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    auto n = std::make_shared<Node>();
    n->value = v;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    for (const auto& f : kFunctions) {
      if (f.name != name) continue;
      if (!accept('(')) fail("expected '(' after " + std::string(name));
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::call;
      n->func = f.func;
      n->args.push_back(expr());
      for (int i = 1; i < f.arity; ++i) {
        if (!accept(',')) fail("expected ',' in call to " + std::string(name));
        n->args.push_back(expr());
      }
      if (!accept(')')) fail("expected ')' closing " + std::string(name));
      return n;
    }
    static constexpr std::string_view kVariables[] = {"x", "y", "s1", "s2"};
    for (int i = 0; i < 4; ++i) {
      if (kVariables[i] == name) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::variable;
        n->variable = i;
        return n;
      }
    }
    auto n = std::make_shared<Node>();
    if (name == "pi") {
      n->value = std::numbers::pi;
      return n;
    }
    if (auto it = constants_.find(name); it != constants_.end()) {
      n->value = it->second;
      return n;
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "'");
  }

  std::string_view text_;
  const Expression::Constants& constants_;
  std::size_t pos_ = 0;
};

double eval(const Node& n, const double (&vars)[4]) {
  switch (n.kind) {
    case Node::Kind::number:
      return n.value;
    case Node::Kind::variable:
      return vars[n.variable];
    case Node::Kind::negate:
      return -eval(*n.args[0], vars);
    case Node::Kind::binary: {
      const double a = eval(*n.args[0], vars);
      const double b = eval(*n.args[1], vars);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        default: return std::pow(a, b);
      }
    }
    case Node::Kind::call: {
      const double a = eval(*n.args[0], vars);
      switch (n.func) {
        case Node::Func::exp: return std::exp(a);
        case Node::Func::log: return std::log(a);
        case Node::Func::tanh: return std::tanh(a);
        case Node::Func::abs: return std::abs(a);
        case Node::Func::sqrt: return std::sqrt(a);
        case Node::Func::sin: return std::sin(a);
        case Node::Func::cos: return std::cos(a);
        case Node::Func::pow: return std::pow(a, eval(*n.args[1], vars));
        case Node::Func::min: return std::min(a, eval(*n.args[1], vars));
        case Node::Func::max: return std::max(a, eval(*n.args[1], vars));
      }
    }
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(std::string_view text, const Constants& constants) {
  Expression e;
  e.text_ = std::string(text);
  e.root_ = Parser(text, constants).parse();
  return e;
}

double Expression::evaluate(double x, double y, double s1, double s2) const {
  if (!root_) throw std::logic_error("Expression: evaluating an empty expression");
  const double vars[4] = {x, y, s1, s2};
  return eval(*root_, vars);
}

}  // namespace robin_plap
