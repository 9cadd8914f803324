#include "nsbf/cli/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace nsbf::cli {

using NodePtr = std::shared_ptr<const Expression::Node>;

struct Expression::Node {
  enum class Kind { number, var, add, sub, mul, div, pow, neg, exp, log, sin, cos, sqrt };
  Kind kind;
  double value = 0.0;
  NodePtr a, b;
};

namespace {

using Kind = Expression::Node::Kind;

NodePtr leaf(double v) { return std::make_shared<Expression::Node>(Expression::Node{Kind::number, v, {}, {}}); }
NodePtr var() { return std::make_shared<Expression::Node>(Expression::Node{Kind::var, 0.0, {}, {}}); }

bool is_number(const NodePtr& n, double v) { return n->kind == Kind::number && n->value == v; }

// Builders fold constants and drop neutral elements so derivatives stay readable.
NodePtr make(Kind k, NodePtr a, NodePtr b = {}) {
  if (a->kind == Kind::number && (!b || b->kind == Kind::number)) {
    const double x = a->value, y = b ? b->value : 0.0;
    switch (k) {
      case Kind::add: return leaf(x + y);
      case Kind::sub: return leaf(x - y);
      case Kind::mul: return leaf(x * y);
      case Kind::neg: return leaf(-x);
      default: break;
    }
  }
  switch (k) {
    case Kind::add:
      if (is_number(a, 0)) return b;
      if (is_number(b, 0)) return a;
      break;
    case Kind::sub:
      if (is_number(b, 0)) return a;
      if (is_number(a, 0)) return make(Kind::neg, b);
      break;
    case Kind::mul:
      if (is_number(a, 0) || is_number(b, 0)) return leaf(0.0);
      if (is_number(a, 1)) return b;
      if (is_number(b, 1)) return a;
      break;
    case Kind::div:
      if (is_number(a, 0)) return leaf(0.0);
      if (is_number(b, 1)) return a;
      break;
    case Kind::pow:
      if (is_number(b, 1)) return a;
      if (is_number(b, 0)) return leaf(1.0);
      break;
    case Kind::neg:
      if (a->kind == Kind::neg) return a->a;
      break;
    default:
      break;
  }
  return std::make_shared<Expression::Node>(Expression::Node{k, 0.0, std::move(a), std::move(b)});
}

double eval(const Expression::Node& n, double y) {
  switch (n.kind) {
    case Kind::number: return n.value;
    case Kind::var: return y;
    case Kind::add: return eval(*n.a, y) + eval(*n.b, y);
    case Kind::sub: return eval(*n.a, y) - eval(*n.b, y);
    case Kind::mul: return eval(*n.a, y) * eval(*n.b, y);
    case Kind::div: return eval(*n.a, y) / eval(*n.b, y);
    case Kind::pow: {
      if (n.b->kind == Kind::number && n.b->value == std::floor(n.b->value) && std::abs(n.b->value) <= 64) {
        const double base = eval(*n.a, y);
        int e = static_cast<int>(n.b->value);
        double r = 1.0, f = e < 0 ? 1.0 / base : base;
        for (e = std::abs(e); e > 0; e >>= 1, f *= f)
          if (e & 1) r *= f;
        return r;
      }
      return std::pow(eval(*n.a, y), eval(*n.b, y));
    }
    case Kind::neg: return -eval(*n.a, y);
    case Kind::exp: return std::exp(eval(*n.a, y));
    case Kind::log: return std::log(eval(*n.a, y));
    case Kind::sin: return std::sin(eval(*n.a, y));
    case Kind::cos: return std::cos(eval(*n.a, y));
    case Kind::sqrt: return std::sqrt(eval(*n.a, y));
  }
  return 0.0;
}

bool depends_on_y(const NodePtr& n) {
  if (!n) return false;
  if (n->kind == Kind::var) return true;
  return depends_on_y(n->a) || depends_on_y(n->b);
}

NodePtr diff(const NodePtr& n) {
  const NodePtr& a = n->a;
  const NodePtr& b = n->b;
  switch (n->kind) {
    case Kind::number: return leaf(0.0);
    case Kind::var: return leaf(1.0);
    case Kind::add: return make(Kind::add, diff(a), diff(b));
    case Kind::sub: return make(Kind::sub, diff(a), diff(b));
    case Kind::mul: return make(Kind::add, make(Kind::mul, diff(a), b), make(Kind::mul, a, diff(b)));
    case Kind::div:
      return make(Kind::div, make(Kind::sub, make(Kind::mul, diff(a), b), make(Kind::mul, a, diff(b))),
                  make(Kind::pow, b, leaf(2.0)));
    case Kind::pow:
      if (!depends_on_y(b)) {
        // (a^c)' = c a^(c-1) a'
        return make(Kind::mul, make(Kind::mul, b, make(Kind::pow, a, make(Kind::sub, b, leaf(1.0)))),
                    diff(a));
      }
      // (a^b)' = a^b (b' log a + b a'/a)
      return make(Kind::mul, n,
                  make(Kind::add, make(Kind::mul, diff(b), make(Kind::log, a)),
                       make(Kind::div, make(Kind::mul, b, diff(a)), a)));
    case Kind::neg: return make(Kind::neg, diff(a));
    case Kind::exp: return make(Kind::mul, n, diff(a));
    case Kind::log: return make(Kind::div, diff(a), a);
    case Kind::sin: return make(Kind::mul, make(Kind::cos, a), diff(a));
    case Kind::cos: return make(Kind::neg, make(Kind::mul, make(Kind::sin, a), diff(a)));
    case Kind::sqrt: return make(Kind::div, diff(a), make(Kind::mul, leaf(2.0), n));
  }
  return leaf(0.0);
}

void print(const Expression::Node& n, std::ostream& os) {
  static const char* names[] = {"", "", "+", "-", "*", "/", "^", "", "exp", "log", "sin", "cos", "sqrt"};
  switch (n.kind) {
    case Kind::number: {
      std::ostringstream num;
      num.precision(17);
      num << n.value;
      os << num.str();
      return;
    }
    case Kind::var: os << 'y'; return;
    case Kind::neg: os << "(-"; print(*n.a, os); os << ')'; return;
    case Kind::exp: case Kind::log: case Kind::sin: case Kind::cos: case Kind::sqrt:
      os << names[static_cast<int>(n.kind)] << '(';
      print(*n.a, os);
      os << ')';
      return;
    default:
      os << '(';
      print(*n.a, os);
      os << names[static_cast<int>(n.kind)];
      print(*n.b, os);
      os << ')';
  }
}

// expr   := term (('+' | '-') term)*
// term   := unary (('*' | '/') unary)*
// unary  := '-' unary | '+' unary | power
// power  := atom ('^' unary)?
// atom   := number | 'y' | func '(' expr ')' | '(' expr ')'
class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr run() {
    skip();
    if (pos_ >= s_.size()) fail("empty expression");
    NodePtr n = expr();
    skip();
    if (pos_ < s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_ + 1); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (eat('+')) n = make(Kind::add, n, term());
      else if (eat('-')) n = make(Kind::sub, n, term());
      else return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (eat('*')) n = make(Kind::mul, n, unary());
      else if (eat('/')) n = make(Kind::div, n, unary());
      else return n;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Kind::neg, unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (eat('^')) return make(Kind::pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      return leaf(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string word = s_.substr(start, pos_ - start);
      if (word == "y") return var();
      static const std::vector<std::pair<std::string, Kind>> funcs = {
          {"exp", Kind::exp}, {"log", Kind::log}, {"sin", Kind::sin}, {"cos", Kind::cos}, {"sqrt", Kind::sqrt}};
      for (const auto& [name, kind] : funcs) {
        if (word != name) continue;
        if (!eat('(')) fail("expected '(' after " + name);
        NodePtr arg = expr();
        if (!eat(')')) fail("expected ')'");
        return make(kind, arg);
      }
      pos_ = start;
      fail("unknown identifier '" + word + "'");
    }
    fail(std::string("unexpected '") + c + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(std::shared_ptr<const Node> root, std::string source)
    : root_(std::move(root)), source_(std::move(source)) {}

Expression Expression::parse(const std::string& text) { return Expression(Parser(text).run(), text); }

double Expression::operator()(double y) const { return eval(*root_, y); }

Expression Expression::derivative() const {
  Expression d(diff(root_));
  d.source_ = d.to_string();
  return d;
}

std::string Expression::to_string() const {
  std::ostringstream os;
  print(*root_, os);
  return os.str();
}

}  // namespace nsbf::cli
