#include "starsplit/errors.hpp"
#include "starsplit/expr.hpp"
#include "test_util.hpp"

using namespace starsplit;

TEST_CASE("arithmetic and precedence") {
  CHECK(Expr::parse("1+2*3").evaluate() == cplx(7.0, 0.0));
  CHECK(Expr::parse("(1+2)*3").evaluate() == cplx(9.0, 0.0));
  CHECK(Expr::parse("-2-3").evaluate() == cplx(-5.0, 0.0));
  CHECK(Expr::parse("1/4").evaluate() == cplx(0.25, 0.0));
  CHECK(Expr::parse("--1").evaluate() == cplx(1.0, 0.0));
}

TEST_CASE("imaginary unit and suffix") {
  CHECK(Expr::parse("i").evaluate() == cplx(0.0, 1.0));
  CHECK(Expr::parse("2.5i").evaluate() == cplx(0.0, 2.5));
  CHECK(Expr::parse("i*i").evaluate() == cplx(-1.0, 0.0));
  CHECK(Expr::parse("1e-3i").evaluate() == cplx(0.0, 1e-3));
}

TEST_CASE("parameters and functions") {
  const Bindings b{{"t", cplx(0.1, 0.2)}};
  CHECK(std::abs(Expr::parse("conj(t)").evaluate(b) - cplx(0.1, -0.2)) < 1e-15);
  CHECK(std::abs(Expr::parse("abs2(t)").evaluate(b) - cplx(0.05, 0.0)) < 1e-15);
  const cplx ce = Expr::parse("i*(conj(t)+1)/(1-abs2(t))").evaluate(b);
  CHECK(std::abs(ce - cplx(0.0, 1.0) * (std::conj(b.at("t")) + 1.0) / 0.95) < 1e-15);
}

TEST_CASE("errors are input errors") {
  CHECK_THROWS_AS(Expr::parse("1+"), InputError);
  CHECK_THROWS_AS(Expr::parse("(1"), InputError);
  CHECK_THROWS_AS(Expr::parse("foo(1)"), InputError);
  CHECK_THROWS_AS(Expr::parse("t").evaluate(), InputError);
  CHECK_THROWS_AS(Expr::parse("1/0").evaluate(), InputError);
  CHECK_THROWS_AS(parse_complex("t"), InputError);
}

TEST_CASE("complex literals round-trip exactly") {
  for (const cplx c : {cplx(0.1, 0.0), cplx(0.0, -0.2), cplx(0.1, 0.1), cplx(1.0 / 3.0, -2.0 / 7.0), cplx(-1e-300, 5e20)})
    CHECK(parse_complex(format_complex(c)) == c);
  CHECK(parse_complex("0+0.25i") == cplx(0.0, 0.25));
  CHECK(parse_complex("-0.2i") == cplx(0.0, -0.2));
  CHECK(parse_complex("0.1+0.1i") == cplx(0.1, 0.1));
}
