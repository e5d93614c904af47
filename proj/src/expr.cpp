#include "starsplit/expr.hpp"

#include <cctype>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <vector>

#include "starsplit/errors.hpp"

namespace starsplit {

struct Expr::Node {
  enum class Kind { Constant, Param, Negate, Conj, Abs2, Add, Sub, Mul, Div } kind;
  cplx value{};
  std::string name;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

NodePtr make_constant(cplx c) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Kind::Constant;
  n->value = c;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("expression '" + std::string(s_) + "' at position " + std::to_string(pos_) + ": " + msg);
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
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Kind::Add, lhs, term());
      else if (accept('-')) lhs = make(Kind::Sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Kind::Mul, lhs, unary());
      else if (accept('/')) lhs = make(Kind::Div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::Negate, unary());
    if (accept('+')) return unary();
    return primary();
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    double v = 0.0;
    const char* begin = s_.data() + pos_;
    auto [end, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("malformed number");
    pos_ += std::size_t(end - begin);
    // An immediately following 'i' (not starting a longer name) marks an imaginary literal.
    if (pos_ < s_.size() && s_[pos_] == 'i' &&
        (pos_ + 1 == s_.size() || !(std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '_'))) {
      ++pos_;
      return make_constant(cplx(0.0, v));
    }
    return make_constant(cplx(v, 0.0));
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string id(s_.substr(start, pos_ - start));
    if (accept('(')) {
      Kind k;
      if (id == "conj") k = Kind::Conj;
      else if (id == "abs2") k = Kind::Abs2;
      else fail("unknown function '" + id + "'");
      NodePtr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return make(k, arg);
    }
    if (id == "i") return make_constant(cplx(0.0, 1.0));
    auto n = std::make_shared<Expr::Node>();
    n->kind = Kind::Param;
    n->name = std::move(id);
    return n;
  }
};

cplx eval(const Expr::Node& n, const Bindings& params) {
  switch (n.kind) {
    case Kind::Constant: return n.value;
    case Kind::Param: {
      auto it = params.find(n.name);
      if (it == params.end()) throw InputError("unbound parameter '" + n.name + "'");
      return it->second;
    }
    case Kind::Negate: return -eval(*n.lhs, params);
    case Kind::Conj: return std::conj(eval(*n.lhs, params));
    case Kind::Abs2: return std::norm(eval(*n.lhs, params));
    case Kind::Add: return eval(*n.lhs, params) + eval(*n.rhs, params);
    case Kind::Sub: return eval(*n.lhs, params) - eval(*n.rhs, params);
    case Kind::Mul: return eval(*n.lhs, params) * eval(*n.rhs, params);
    case Kind::Div: {
      const cplx d = eval(*n.rhs, params);
      if (std::abs(d) < 1e-300) throw InputError("division by zero in structure coefficient");
      return eval(*n.lhs, params) / d;
    }
  }
  throw InputError("corrupt expression");
}

bool has_params(const Expr::Node& n) {
  if (n.kind == Kind::Param) return true;
  return (n.lhs && has_params(*n.lhs)) || (n.rhs && has_params(*n.rhs));
}

}  // namespace

Expr Expr::parse(std::string_view text) {
  Expr e;
  e.root_ = Parser(text).parse();
  e.source_ = std::string(text);
  return e;
}

Expr Expr::constant(cplx c) {
  Expr e;
  e.root_ = make_constant(c);
  e.source_ = format_complex(c);
  return e;
}

cplx Expr::evaluate(const Bindings& params) const {
  if (!root_) throw InputError("empty expression");
  const cplx v = eval(*root_, params);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw InputError("non-finite structure coefficient");
  return v;
}

cplx parse_complex(std::string_view text) {
  auto root = Parser(text).parse();
  if (has_params(*root)) throw InputError("'" + std::string(text) + "' is not a complex literal");
  return eval(*root, {});
}

std::string format_complex(cplx c) {
  char re[32], im[32];
  std::snprintf(re, sizeof re, "%.17g", c.real());
  std::snprintf(im, sizeof im, "%.17g", std::abs(c.imag()));
  if (c.imag() == 0.0) return re;
  return std::string(re) + (std::signbit(c.imag()) ? "-" : "+") + im + "i";
}

}  // namespace starsplit
