#include <cmath>

#include "starsplit/form.hpp"
#include "starsplit/verify.hpp"
#include "test_util.hpp"

using namespace starsplit;
using starsplit::testing::dist;
using starsplit::testing::I;

TEST_CASE("one-forms anticommute and square to zero") {
  const int n = 3;
  const Form a = Form::phi(n, 0), b = Form::phibar(n, 1);
  CHECK(dist(wedge(a, b), -wedge(b, a)) == 0.0);
  CHECK(wedge(a, a).is_zero());
  CHECK(wedge(b, b).is_zero());
}

TEST_CASE("graded commutativity on random forms") {
  const int n = 4;
  for (int p = 0; p <= 2; ++p)
    for (int q = 0; q <= 2; ++q)
      for (int r = 0; r <= 1; ++r) {
        const Form u = random_form(n, p, q, 11 + p * 7 + q);
        const Form v = random_form(n, r, 1, 29 + r);
        const double sign = ((p + q) * (r + 1)) % 2 ? -1.0 : 1.0;
        CHECK(dist(wedge(u, v), sign * wedge(v, u)) < 1e-14);
      }
}

TEST_CASE("wedge is associative") {
  const int n = 4;
  const Form a = random_form(n, 1, 0, 1), b = random_form(n, 1, 1, 2), c = random_form(n, 0, 1, 3);
  CHECK(dist(wedge(wedge(a, b), c), wedge(a, wedge(b, c))) < 1e-13);
}

TEST_CASE("monomial builder applies the reordering sign") {
  const int n = 3;
  // phi2 ^ phi1 = -phi1 ^ phi2
  CHECK(dist(Form::monomial(n, std::vector<int>{1, 0}, std::vector<int>{}), -Form::monomial(n, std::vector<int>{0, 1}, std::vector<int>{})) == 0.0);
  CHECK(Form::monomial(n, std::vector<int>{1, 1}, std::vector<int>{}).is_zero());
  // phibar1 ^ phi1 written with holomorphic factors first
  CHECK(dist(wedge(Form::phibar(n, 0), Form::phi(n, 0)), -Form::monomial(n, std::vector<int>{0}, std::vector<int>{0})) == 0.0);
}

TEST_CASE("bidegree bookkeeping") {
  const int n = 5;
  CHECK(bidegree_basis(n, 2, 3).size() == 100);
  CHECK(bidegree_basis(n, 0, 0).size() == 1);
  CHECK(bidegree_basis(n, 6, 0).empty());
  CHECK(bidegree_basis(n, -1, 0).empty());
  const Form u = random_form(n, 2, 1, 5) + random_form(n, 1, 1, 6);
  CHECK(u.bidegrees().size() == 2);
  CHECK_FALSE(u.bidegree().has_value());
  CHECK(dist(bidegree_component(u, 2, 1) + bidegree_component(u, 1, 1), u) == 0.0);
  CHECK(dist(degree_component(u, 3), bidegree_component(u, 2, 1)) == 0.0);
}

TEST_CASE("coefficient vectors round-trip") {
  const int n = 4;
  const Form u = random_form(n, 2, 1, 9);
  const auto v = coefficient_vector(u, 2, 1);
  CHECK(v.size() == 24);
  CHECK(dist(from_coefficients(n, 2, 1, v), u) == 0.0);
  // Other bidegrees are ignored.
  CHECK(coefficient_vector(u, 1, 1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("conjugation swaps bidegrees and is an involution") {
  const int n = 3;
  const Form u = random_form(n, 2, 1, 3);
  const Form c = conjugate(u);
  REQUIRE(c.bidegree().has_value());
  CHECK(*c.bidegree() == std::pair{1, 2});
  CHECK(dist(conjugate(c), u) == 0.0);
  // conj(i phi1 ^ phibar1) = i phi1 ^ phibar1
  const Form w = I * Form::monomial(n, std::vector<int>{0}, std::vector<int>{0});
  CHECK(is_real(w, 1e-15));
  CHECK(is_real(random_real_form(n, 1, 4), 1e-15));
}

TEST_CASE("tiny coefficients are dropped") {
  const int n = 2;
  const Form u = Form::from_terms(n, {{monomial_key(n, {1, 0}), 1e-16}, {monomial_key(n, {2, 0}), 1.0}});
  CHECK(u.terms().size() == 1);
  const Form z = Form::phi(n, 0) - Form::phi(n, 0);
  CHECK(z.is_zero());
}

TEST_CASE("coframe substitution matches the wedge of substituted generators") {
  const int n = 3;
  Eigen::MatrixXcd a(n, n);
  a << 1.0, cplx(0, 2), 0.5, 0.0, 1.0, cplx(1, 1), cplx(0.3, -0.2), 0.0, 2.0;
  const CoframeSubstitution sub(a);
  auto image = [&](int k) {
    Form out(n);
    for (int j = 0; j < n; ++j) out = out + a(k, j) * Form::phi(n, j);
    return out;
  };
  const Form lhs = sub.apply(wedge(Form::phi(n, 0), Form::phibar(n, 2)));
  const Form rhs = wedge(image(0), conjugate(image(2)));
  CHECK(dist(lhs, rhs) < 1e-14);
}

TEST_CASE("labels") {
  CHECK(monomial_label(Monomial{0b011, 0b100}) == "phi1^phi2^phibar3");
  CHECK(monomial_label(Monomial{}) == "1");
}
