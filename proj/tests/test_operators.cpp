#include "starsplit/analysis.hpp"
#include "starsplit/catalog.hpp"
#include "starsplit/errors.hpp"
#include "starsplit/operators.hpp"
#include "starsplit/verify.hpp"
#include "test_util.hpp"

using namespace starsplit;
using starsplit::testing::dist;
using starsplit::testing::I;

TEST_CASE("lambda powers and scalar values") {
  const auto g = random_metric(4, 1);
  CHECK(scalar_value(lambda_power(g, g.omega_power(2), 2)).real() == doctest::Approx(12.0));  // 2! C(4,2)
  CHECK(dist(lambda_power(g, g.omega(), 0), g.omega()) == 0.0);
  CHECK_THROWS_AS(scalar_value(g.omega()), InputError);
}

TEST_CASE("T and S on omega and against their composite definitions") {
  for (int n : {3, 4, 5}) {
    const auto g = random_metric(n, 10 + n);
    CHECK(dist(T(g, g.omega()), g.omega() / double(n - 1)) < 1e-12);
    CHECK(dist(S(g, g.omega_power(n - 1)), g.omega_power(n - 1) / double(n - 1)) < 1e-12);
    const Form a = random_form(n, 1, 1, 3);
    CHECK(dist(T(g, a), T_composite(g, a)) < 1e-11);
    const Form b = random_form(n, n - 1, n - 1, 4);
    CHECK(dist(S(g, b), S_composite(g, b)) < 1e-11);
  }
  const auto g = HermitianMetric::standard(3);
  CHECK_THROWS_AS(T(g, random_form(3, 2, 2, 1)), InputError);
  CHECK_THROWS_AS(T(HermitianMetric::standard(2), random_form(2, 1, 1, 1)), InputError);
}

TEST_CASE("P agrees with its trace formula and vanishes on Kahler data") {
  const auto e = catalog::get("nakamura");
  const auto g = random_metric(3, 4);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Form a = random_form(3, 1, 1, s);
    CHECK(dist(P(e.manifold, g, a), P_trace(e.manifold, g, a)) < 1e-12);
  }
  const auto t = catalog::get("torus_3");
  CHECK(P(t.manifold, g, random_form(3, 1, 1, 1)).is_zero());
  CHECK(R(t.manifold, g, random_form(3, 1, 1, 1)).is_zero());
}

TEST_CASE("P(omega) determines f and rho on Iwasawa") {
  const auto e = catalog::get("iwasawa3");
  const auto& g = e.metric;
  const Form p = P(e.manifold, g, g.omega());
  // n = 3: f = (n-1) Lambda(P(omega)).
  CHECK(2.0 * scalar_value(lefschetz_lambda(g, p)).real() == doctest::Approx(1.0));
}

TEST_CASE("Q is minus the dbar-Laplacian on the torus") {
  const auto t = catalog::get("torus_4");
  const auto g = random_metric(4, 6);
  const Form a = random_form(4, 1, 1, 7);
  CHECK(dist(Q(t.manifold, g, a), -laplacian_delbar(t.manifold, g, a)) < 1e-12);
}

TEST_CASE("Q(omega) = P(omega) on balanced metrics") {
  for (const auto& name : {"iwasawa3", "nakamura", "iwasawa5"}) {
    const auto e = catalog::get(name);
    CHECK(dist(Q(e.manifold, e.metric, e.metric.omega()), P(e.manifold, e.metric, e.metric.omega())) < 1e-12);
  }
}

TEST_CASE("torsion operators vanish exactly on Kahler metrics") {
  const auto e = catalog::get("iwasawa3");
  const Form u = random_form(3, 1, 0, 2);
  CHECK(torsion_tau(e.manifold, e.metric, u).max_abs() > 1e-3);
  const auto t = catalog::get("torus_3");
  CHECK(torsion_tau(t.manifold, t.metric, u).is_zero());
  CHECK(torsion_tau_bar(t.manifold, t.metric, u).is_zero());
}
