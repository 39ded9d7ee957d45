#include "nsv/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "nsv/error.hpp"

namespace nsv {

struct Expression::Node {
  enum class Kind { number, var, neg, add, sub, mul, div, pow, sin, cos, exp } kind = Kind::number;
  double number = 0.0;
  int var = 0;  // 0..2 spatial, 3 time
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    auto n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression '" + s_ + "', column " + std::to_string(pos_ + 1) + ": " + what, 0);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    auto n = term();
    for (;;) {
      if (accept('+')) n = make(Node::Kind::add, n, term());
      else if (accept('-')) n = make(Node::Kind::sub, n, term());
      else return n;
    }
  }
  NodePtr term() {
    auto n = unary();
    for (;;) {
      if (accept('*')) n = make(Node::Kind::mul, n, unary());
      else if (accept('/')) n = make(Node::Kind::div, n, unary());
      else return n;
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Node::Kind::neg, unary());
    if (accept('+')) return unary();
    return power();
  }
  NodePtr power() {
    auto base = primary();
    if (accept('^')) return make(Node::Kind::pow, base, unary());
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    if (accept('(')) {
      auto n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Node>();
      n->number = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string id;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) id += s_[pos_++];
      if (id == "sin" || id == "cos" || id == "exp") {
        if (!accept('(')) fail("expected '(' after " + id);
        auto arg = expr();
        if (!accept(')')) fail("expected ')'");
        return make(id == "sin" ? Node::Kind::sin : id == "cos" ? Node::Kind::cos : Node::Kind::exp, arg);
      }
      auto n = std::make_shared<Node>();
      if (id == "pi") {
        n->number = std::numbers::pi;
        return n;
      }
      static const std::string vars[] = {"x", "y", "z", "t"};
      for (int i = 0; i < 4; ++i)
        if (id == vars[i]) {
          n->kind = Node::Kind::var;
          n->var = i;
          return n;
        }
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval(const Node& n, const Point& x, double t) {
  switch (n.kind) {
    case Node::Kind::number: return n.number;
    case Node::Kind::var: return n.var < 3 ? x[n.var] : t;
    case Node::Kind::neg: return -eval(*n.a, x, t);
    case Node::Kind::add: return eval(*n.a, x, t) + eval(*n.b, x, t);
    case Node::Kind::sub: return eval(*n.a, x, t) - eval(*n.b, x, t);
    case Node::Kind::mul: return eval(*n.a, x, t) * eval(*n.b, x, t);
    case Node::Kind::div: return eval(*n.a, x, t) / eval(*n.b, x, t);
    case Node::Kind::pow: return std::pow(eval(*n.a, x, t), eval(*n.b, x, t));
    case Node::Kind::sin: return std::sin(eval(*n.a, x, t));
    case Node::Kind::cos: return std::cos(eval(*n.a, x, t));
    case Node::Kind::exp: return std::exp(eval(*n.a, x, t));
  }
  return 0.0;
}

Dual scale(const Dual& a, double s, double value) {
  Dual r;
  r.v = value;
  for (int i = 0; i < 3; ++i) r.d[i] = s * a.d[i];
  return r;
}

Dual eval_dual(const Node& n, const Point& x, double t) {
  Dual r;
  switch (n.kind) {
    case Node::Kind::number: r.v = n.number; return r;
    case Node::Kind::var:
      r.v = n.var < 3 ? x[n.var] : t;
      if (n.var < 3) r.d[n.var] = 1.0;
      return r;
    case Node::Kind::neg: {
      const Dual a = eval_dual(*n.a, x, t);
      return scale(a, -1.0, -a.v);
    }
    case Node::Kind::sin: {
      const Dual a = eval_dual(*n.a, x, t);
      return scale(a, std::cos(a.v), std::sin(a.v));
    }
    case Node::Kind::cos: {
      const Dual a = eval_dual(*n.a, x, t);
      return scale(a, -std::sin(a.v), std::cos(a.v));
    }
    case Node::Kind::exp: {
      const Dual a = eval_dual(*n.a, x, t);
      const double e = std::exp(a.v);
      return scale(a, e, e);
    }
    default: break;
  }
  const Dual a = eval_dual(*n.a, x, t);
  const Dual b = eval_dual(*n.b, x, t);
  for (int i = 0; i < 3; ++i) {
    switch (n.kind) {
      case Node::Kind::add: r.d[i] = a.d[i] + b.d[i]; break;
      case Node::Kind::sub: r.d[i] = a.d[i] - b.d[i]; break;
      case Node::Kind::mul: r.d[i] = a.d[i] * b.v + a.v * b.d[i]; break;
      case Node::Kind::div: r.d[i] = (a.d[i] * b.v - a.v * b.d[i]) / (b.v * b.v); break;
      case Node::Kind::pow: {
        // d(a^b) = b a^(b-1) da + a^b ln(a) db; the second term only when b varies.
        double g = a.d[i] == 0.0 ? 0.0 : b.v * std::pow(a.v, b.v - 1.0) * a.d[i];
        if (b.d[i] != 0.0) g += std::pow(a.v, b.v) * std::log(a.v) * b.d[i];
        r.d[i] = g;
        break;
      }
      default: break;
    }
  }
  switch (n.kind) {
    case Node::Kind::add: r.v = a.v + b.v; break;
    case Node::Kind::sub: r.v = a.v - b.v; break;
    case Node::Kind::mul: r.v = a.v * b.v; break;
    case Node::Kind::div: r.v = a.v / b.v; break;
    case Node::Kind::pow: r.v = std::pow(a.v, b.v); break;
    default: break;
  }
  return r;
}

}  // namespace

Expression::Expression(const std::string& text) : text_(text), root_(Parser(text_).parse()) {}

double Expression::operator()(const Point& x, double t) const { return eval(*root_, x, t); }

Dual Expression::dual(const Point& x, double t) const { return eval_dual(*root_, x, t); }

TimeVelocityField make_vector_field(const std::vector<Expression>& components) {
  TimeVelocityField f;
  f.value = [components](const Point& x, double t) {
    Vec3 v{0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < components.size() && j < 3; ++j) v[j] = components[j](x, t);
    return v;
  };
  f.gradient = [components](const Point& x, double t) {
    Mat3 g{};
    for (std::size_t j = 0; j < components.size() && j < 3; ++j) g[j] = components[j].dual(x, t).d;
    return g;
  };
  return f;
}

}  // namespace nsv
