#include "starsplit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "starsplit/errors.hpp"

namespace starsplit {

namespace {

const cplx I(0.0, 1.0);

void require_dim3(const InvariantComplexManifold& m) {
  if (m.dim() < 3) throw InputError("the star split apparatus needs complex dimension at least 3");
}

void require_same_dim(const InvariantComplexManifold& m, const HermitianMetric& g) {
  if (m.dim() != g.dim()) throw InputError("metric and manifold dimensions differ");
}

Flag make_flag(double defect, double tol, double scale) { return {defect < tol * (1.0 + scale), defect}; }

double scalar_part(const Form& u) { return u.coeff(Monomial{0, 0}).real(); }

// Pieces shared by the single-metric and the pair pipelines: everything is
// computed from i ddbar omega_{n-2} and the reference metric gamma.
struct RhoData {
  Form rho, star_rho, closed_form;
  double f = 0.0, f_imag = 0.0, f_trace = 0.0, star_residual = 0.0;
};

RhoData rho_data(const InvariantComplexManifold& m, const HermitianMetric& omega, const HermitianMetric& gamma,
                 double tol) {
  const int n = m.dim();
  const Form iddbar = i_ddbar(m, omega.omega_power(n - 2));
  RhoData out;
  out.rho = divide_by_power(gamma, n - 2, iddbar, tol);
  out.star_rho = hodge_star(gamma, out.rho);
  const cplx ratio = top_ratio(wedge(gamma.omega(), iddbar), gamma.omega_power(n));
  out.f = ratio.real();
  out.f_imag = ratio.imag();
  out.f_trace = double(n - 1) * scalar_part(lefschetz_lambda(gamma, out.rho));
  out.closed_form = (out.f / double(n - 1)) * gamma.omega_power(n - 1) - iddbar;
  out.star_residual = (out.star_rho - out.closed_form).max_abs();
  return out;
}

}  // namespace

std::vector<std::pair<std::string, Flag>> MetricReport::flags() const {
  return {{"kahler", kahler},
          {"balanced", balanced},
          {"gauduchon", gauduchon},
          {"skt", skt},
          {"astheno_kahler", astheno_kahler},
          {"n2_gauduchon", n2_gauduchon},
          {"pluriclosed_star_split", pluriclosed_star_split},
          {"closed_star_split", closed_star_split}};
}

Form i_ddbar(const InvariantComplexManifold& m, const Form& u) { return I * m.del(m.delbar(u)); }

Form rho(const InvariantComplexManifold& m, const HermitianMetric& g) {
  require_dim3(m);
  require_same_dim(m, g);
  return divide_by_power(g, m.dim() - 2, i_ddbar(m, g.omega_power(m.dim() - 2)));
}

Form star_rho(const InvariantComplexManifold& m, const HermitianMetric& g) { return hodge_star(g, rho(m, g)); }

Form star_rho_closed_form(const InvariantComplexManifold& m, const HermitianMetric& g) {
  const int n = m.dim();
  const double f = f_scalar(m, g);
  return (f / double(n - 1)) * g.omega_power(n - 1) - i_ddbar(m, g.omega_power(n - 2));
}

cplx top_ratio(const Form& numerator, const Form& denominator) {
  const int n = denominator.dim();
  const std::uint32_t full = (1u << n) - 1u;
  const cplx den = denominator.coeff(Monomial{full, full});
  if (std::abs(den) < 1e-300) throw InputError("denominator top form vanishes");
  return numerator.coeff(Monomial{full, full}) / den;
}

double f_scalar(const InvariantComplexManifold& m, const HermitianMetric& g) {
  require_dim3(m);
  require_same_dim(m, g);
  const int n = m.dim();
  const cplx r = top_ratio(wedge(g.omega(), i_ddbar(m, g.omega_power(n - 2))), g.omega_power(n));
  if (std::abs(r.imag()) > 1e-8 * (1.0 + std::abs(r.real())))
    throw std::logic_error("f has a non-zero imaginary part: the exterior algebra is inconsistent");
  return r.real();
}

double defect_scale(const InvariantComplexManifold& m, const HermitianMetric& g) {
  double c = 0.0;
  for (int k = 0; k < m.dim(); ++k) c = std::max(c, m.d_phi(k).max_abs());
  const double h = g.matrix().cwiseAbs().maxCoeff();
  // Defects are at most quadratic in the structure constants and of degree n in H.
  return std::pow(std::max(1.0, h), m.dim()) * std::pow(std::max(1.0, c), 2) - 1.0;
}

MetricReport classify(const InvariantComplexManifold& m, const HermitianMetric& g, double tol) {
  require_dim3(m);
  require_same_dim(m, g);
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  const int n = m.dim();
  MetricReport r;
  r.manifold = m.name();
  r.dim = n;
  r.tolerance = tol;
  r.scale = defect_scale(m, g);

  const Form& w = g.omega();
  const Form& w1 = g.omega_power(n - 1);
  const Form& w2 = g.omega_power(n - 2);
  const Form ddbar_w2 = m.del(m.delbar(w2));
  r.kahler = make_flag(m.d(w).max_abs(), tol, r.scale);
  r.balanced = make_flag(m.d(w1).max_abs(), tol, r.scale);
  r.gauduchon = make_flag(m.del(m.delbar(w1)).max_abs(), tol, r.scale);
  r.skt = make_flag(m.del(m.delbar(w)).max_abs(), tol, r.scale);
  r.astheno_kahler = make_flag(ddbar_w2.max_abs(), tol, r.scale);
  r.n2_gauduchon = make_flag(wedge(w, ddbar_w2).max_abs(), tol, r.scale);

  const RhoData d = rho_data(m, g, g, tol);
  r.rho = d.rho;
  r.star_rho = d.star_rho;
  r.f = d.f;
  r.f_imag = d.f_imag;
  r.f_trace = d.f_trace;
  r.star_rho_residual = d.star_residual;
  r.pluriclosed_star_split = make_flag(m.del(m.delbar(d.star_rho)).max_abs(), tol, r.scale);
  r.closed_star_split = make_flag(m.d(d.star_rho).max_abs(), tol, r.scale);
  r.eigenvalues = generalized_eigenvalues(hermitian_coefficients(d.rho), g.matrix());
  r.del_omega_norm2 = l2_pairing(m, g, m.del(w), m.del(w)).real();
  r.integral_f = d.f * integrate(m, g.omega_power(n)).real();

  const double thr = tol * (1.0 + r.scale);
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) {
      r.implications_consistent = false;
      r.notes.push_back("inconsistent: " + msg);
    }
  };
  check(std::abs(d.f_imag) < thr, "f is not real");
  check(std::abs(d.f - d.f_trace) < thr * (1.0 + std::abs(d.f)), "f differs from (n-1) Lambda(rho)");
  check(d.star_residual < thr * (1.0 + r.star_rho.max_abs()), "*rho differs from its closed form");
  // The pluriclosed star split condition read through ddbar(f omega_{n-1}) = 0.
  const double pss_via_f = (d.f * m.del(m.delbar(w1))).max_abs();
  check((pss_via_f < thr) == r.pluriclosed_star_split.value || std::abs(d.f) < thr,
        "ddbar(*rho) and ddbar(f omega_{n-1}) disagree");
  if (r.kahler.value)
    check(r.balanced.value && r.skt.value && r.astheno_kahler.value && r.gauduchon.value, "Kahler metric fails a weaker class");
  if (r.balanced.value) check(r.gauduchon.value, "balanced but not Gauduchon");
  if (r.astheno_kahler.value) check(r.n2_gauduchon.value, "astheno-Kahler but not (n-2)-Gauduchon");
  if (r.n2_gauduchon.value) check(r.closed_star_split.value && std::abs(d.f) < thr, "(n-2)-Gauduchon but f != 0 or *rho not closed");
  if (r.closed_star_split.value) check(r.pluriclosed_star_split.value, "closed star split but not pluriclosed star split");
  if (r.balanced.value && r.n2_gauduchon.value) check(r.kahler.value, "balanced and (n-2)-Gauduchon but not Kahler");
  if (r.balanced.value) {
    check(std::abs(r.integral_f - r.del_omega_norm2) < thr * (1.0 + r.del_omega_norm2),
          "balanced but the integral of f differs from the L2 norm of del omega");
    const bool rho_zero = r.rho.max_abs() < thr;
    check(r.kahler.value == r.astheno_kahler.value && r.kahler.value == rho_zero &&
              rho_zero == (r.star_rho.max_abs() < thr),
          "balanced metric violates Kahler <=> astheno-Kahler <=> rho = 0");
    if (r.pluriclosed_star_split.value) check(d.f > -thr, "balanced pluriclosed star split metric with f < 0");
  }
  r.notes.push_back(std::string("f is constant on invariant forms; sign ") +
                    (std::abs(d.f) < thr ? "zero" : (d.f > 0 ? "positive" : "negative")));
  return r;
}

PairReport pair_analysis(const InvariantComplexManifold& m, const HermitianMetric& omega, const HermitianMetric& gamma,
                         double tol) {
  require_dim3(m);
  require_same_dim(m, omega);
  require_same_dim(m, gamma);
  const RhoData d = rho_data(m, omega, gamma, tol);
  PairReport r;
  r.rho_pair = d.rho;
  r.star_rho_pair = d.star_rho;
  r.f_pair = d.f;
  r.f_pair_trace = d.f_trace;
  r.star_residual = d.star_residual;
  const double scale = std::max(defect_scale(m, omega), defect_scale(m, gamma));
  r.pluriclosed = make_flag(m.del(m.delbar(d.star_rho)).max_abs(), tol, scale);
  r.closed = make_flag(m.d(d.star_rho).max_abs(), tol, scale);
  r.integral_f_gamma = d.f * integrate(m, gamma.omega_power(m.dim())).real();
  return r;
}

TripleReport triple_analysis(const InvariantComplexManifold& m, const PullbackMap& phi, const HermitianMetric& omega,
                             const HermitianMetric& gamma, double tol) {
  if (phi.dim() != m.dim()) throw InputError("pullback map and manifold dimensions differ");
  HermitianMetric pulled = pullback_metric(phi, omega);
  PairReport pair = pair_analysis(m, pulled, gamma, tol);
  return {std::move(pulled), std::move(pair)};
}

std::vector<double> eigenvalues_rel_omega(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& form) {
  require_same_dim(m, g);
  const int n = m.dim();
  const auto b = form.bidegree();
  if (!form.is_zero() && !b) throw InputError("eigenvalues need a form of a single bidegree");
  Form u = form;
  if (b && *b == std::pair<int, int>{n - 1, n - 1} && n != 2) u = hodge_star(g, form);
  else if (b && *b != std::pair<int, int>{1, 1}) throw InputError("eigenvalues need a (1,1)- or (n-1,n-1)-form");
  if (!is_real(u, 1e-9 * (1.0 + u.max_abs()))) throw InputError("eigenvalues need a real form");
  return generalized_eigenvalues(hermitian_coefficients(u), g.matrix());
}

double conformal_f(double f_base, double g_val, double laplacian_g_val) {
  if (!(g_val > 0.0)) throw InputError("conformal factor must be positive");
  return f_base / g_val - 2.0 * laplacian_g_val / (g_val * g_val);
}

double rescale_f(double f_base, double lambda) {
  if (!(lambda > 0.0)) throw InputError("rescaling factor must be positive");
  return f_base / lambda;
}

Form gauduchon_adjoint_on_constant(const InvariantComplexManifold& m, const HermitianMetric& g, double c) {
  require_same_dim(m, g);
  const Form w1 = g.omega_power(m.dim() - 1);
  return (c * I) * hodge_star(g, m.delbar(m.del(w1)));
}

}  // namespace starsplit
