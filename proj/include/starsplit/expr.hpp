#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "starsplit/form.hpp"

namespace starsplit {

using Bindings = std::map<std::string, cplx>;

// Complex-valued expression over named parameters. Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | primary
//   primary := number ['i'] | 'i' | name | name '(' expr ')' | '(' expr ')'
// Functions: conj, abs2. The name 'i' is the imaginary unit.
class Expr {
 public:
  struct Node;

  Expr() = default;
  static Expr parse(std::string_view text);
  static Expr constant(cplx c);

  // Throws InputError for unbound names or division by zero.
  cplx evaluate(const Bindings& params = {}) const;
  const std::string& source() const { return source_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
};

// Parses a parameter-free complex literal such as "0.1+0.2i".
cplx parse_complex(std::string_view text);
// Formats c so that parse_complex round-trips it exactly.
std::string format_complex(cplx c);

}  // namespace starsplit
