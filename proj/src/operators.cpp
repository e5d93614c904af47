#include "starsplit/operators.hpp"

#include "starsplit/analysis.hpp"
#include "starsplit/errors.hpp"

namespace starsplit {

namespace {

const cplx I(0.0, 1.0);

void require_bidegree(const Form& u, int p, int q, const char* what) {
  for (const auto& b : u.bidegrees())
    if (b != std::pair<int, int>{p, q})
      throw InputError(std::string(what) + " expects a (" + std::to_string(p) + "," + std::to_string(q) + ")-form");
}

void require_dim3(int n) {
  if (n < 3) throw InputError("the operator needs complex dimension at least 3");
}

}  // namespace

Form lambda_power(const HermitianMetric& g, const Form& u, int k) {
  Form out = u;
  for (int j = 0; j < k; ++j) out = lefschetz_lambda(g, out);
  return out;
}

cplx scalar_value(const Form& u) {
  for (const auto& b : u.bidegrees())
    if (b != std::pair<int, int>{0, 0}) throw InputError("expected a function (0-form)");
  return u.coeff(Monomial{0, 0});
}

Form T(const HermitianMetric& g, const Form& alpha) {
  require_bidegree(alpha, 1, 1, "T");
  const int n = g.dim();
  require_dim3(n);
  return -alpha + (scalar_value(lefschetz_lambda(g, alpha)) / double(n - 1)) * g.omega();
}

Form T_composite(const HermitianMetric& g, const Form& alpha) {
  require_bidegree(alpha, 1, 1, "T");
  require_dim3(g.dim());
  return divide_by_power(g, g.dim() - 2, hodge_star(g, alpha));
}

Form S(const HermitianMetric& g, const Form& big_omega) {
  const int n = g.dim();
  require_dim3(n);
  require_bidegree(big_omega, n - 1, n - 1, "S");
  const cplx trace = scalar_value(lefschetz_lambda(g, hodge_star(g, big_omega)));
  return -big_omega + (trace / double(n - 1)) * g.omega_power(n - 1);
}

Form S_composite(const HermitianMetric& g, const Form& big_omega) {
  const int n = g.dim();
  require_dim3(n);
  require_bidegree(big_omega, n - 1, n - 1, "S");
  return hodge_star(g, divide_by_power(g, n - 2, big_omega));
}

Form P(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& alpha) {
  const int n = m.dim();
  require_dim3(n);
  require_bidegree(alpha, 1, 1, "P");
  return divide_by_power(g, n - 2, wedge(i_ddbar(m, alpha), g.omega_power(n - 3)));
}

Form P_trace(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& alpha) {
  const int n = m.dim();
  require_dim3(n);
  require_bidegree(alpha, 1, 1, "P");
  const Form gamma = i_ddbar(m, alpha);
  const Form l1 = lefschetz_lambda(g, gamma);
  const cplx l2 = scalar_value(lefschetz_lambda(g, l1));
  return l1 - (l2 / (2.0 * double(n - 1))) * g.omega();
}

Form R(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& alpha) {
  require_bidegree(alpha, 1, 1, "R");
  const cplx c = scalar_value(adjoint_del(m, g, adjoint_delbar(m, g, alpha)));
  return (I * c) * g.omega();
}

Form Q(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& alpha) {
  const int n = m.dim();
  require_dim3(n);
  require_bidegree(alpha, 1, 1, "Q");
  const Form& w = g.omega();
  const Form lam_dbar = lefschetz_lambda(g, m.delbar(alpha));
  const Form dbar_star = adjoint_delbar(m, g, alpha);
  const cplx c = scalar_value(adjoint_delbar(m, g, lam_dbar));
  return P(m, g, alpha) + R(m, g, alpha) - I * m.del(lam_dbar) - I * adjoint_del(m, g, wedge(w, dbar_star)) -
         (c / double(n - 1)) * w;
}

Form torsion_tau(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& u) {
  const Form dw = m.del(g.omega());
  return lefschetz_lambda(g, wedge(dw, u)) - wedge(dw, lefschetz_lambda(g, u));
}

Form torsion_tau_bar(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& u) {
  const Form dw = m.delbar(g.omega());
  return lefschetz_lambda(g, wedge(dw, u)) - wedge(dw, lefschetz_lambda(g, u));
}

}  // namespace starsplit
