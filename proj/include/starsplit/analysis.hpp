#pragma once

#include <string>
#include <utility>
#include <vector>

#include "starsplit/manifold.hpp"
#include "starsplit/metric.hpp"

namespace starsplit {

struct Flag {
  bool value = false;
  double defect = 0.0;
};

struct MetricReport {
  std::string manifold;
  int dim = 0;
  double tolerance = kDefaultTol;
  double scale = 1.0;  // flags pass when defect < tolerance * (1 + scale)

  Flag kahler, balanced, gauduchon, skt, astheno_kahler, n2_gauduchon;
  Flag pluriclosed_star_split, closed_star_split;

  double f = 0.0;            // (omega ^ i ddbar omega_{n-2}) / omega_n
  double f_imag = 0.0;       // imaginary part of the ratio (zero for real forms)
  double f_trace = 0.0;      // (n-1) Lambda(rho)
  Form rho, star_rho;
  double star_rho_residual = 0.0;  // Hodge star route versus the closed form
  std::vector<double> eigenvalues;  // of rho relative to omega, descending
  double del_omega_norm2 = 0.0;     // ||del omega||^2 in L^2
  double integral_f = 0.0;          // integral of f omega_n
  bool implications_consistent = true;
  std::vector<std::string> notes;

  std::vector<std::pair<std::string, Flag>> flags() const;
};

Form i_ddbar(const InvariantComplexManifold& m, const Form& u);

// Unique (1,1)-form with i ddbar omega_{n-2} = omega_{n-2} ^ rho; needs n >= 3.
Form rho(const InvariantComplexManifold& m, const HermitianMetric& g);
Form star_rho(const InvariantComplexManifold& m, const HermitianMetric& g);
// (f / (n-1)) omega_{n-1} - i ddbar omega_{n-2}.
Form star_rho_closed_form(const InvariantComplexManifold& m, const HermitianMetric& g);
double f_scalar(const InvariantComplexManifold& m, const HermitianMetric& g);
// Ratio of two top-degree forms; throws when the denominator vanishes.
cplx top_ratio(const Form& numerator, const Form& denominator);

// Size of the inputs entering the flag thresholds.
double defect_scale(const InvariantComplexManifold& m, const HermitianMetric& g);
MetricReport classify(const InvariantComplexManifold& m, const HermitianMetric& g, double tol = kDefaultTol);

struct PairReport {
  Form rho_pair, star_rho_pair;
  double f_pair = 0.0;
  double f_pair_trace = 0.0;  // (n-1) Lambda_gamma(rho_pair)
  double star_residual = 0.0;
  Flag pluriclosed, closed;
  double integral_f_gamma = 0.0;  // integral of f_pair gamma_n
};

PairReport pair_analysis(const InvariantComplexManifold& m, const HermitianMetric& omega,
                         const HermitianMetric& gamma, double tol = kDefaultTol);

struct TripleReport {
  HermitianMetric pulled_back_omega;
  PairReport pair;
};

// The pair analysis of (phi^* omega, gamma).
TripleReport triple_analysis(const InvariantComplexManifold& m, const PullbackMap& phi,
                             const HermitianMetric& omega, const HermitianMetric& gamma,
                             double tol = kDefaultTol);

// Eigenvalues relative to omega of a real (1,1)-form, or of *Gamma for a real
// (n-1,n-1)-form Gamma; descending.
std::vector<double> eigenvalues_rel_omega(const InvariantComplexManifold& m, const HermitianMetric& g,
                                          const Form& form);

// f of the conformal metric g * omega for balanced omega in dimension 3, from the
// value of g and of its Laplacian at a point.
double conformal_f(double f_base, double g_val, double laplacian_g_val);
double rescale_f(double f_base, double lambda);

// Adjoint of i Lambda ddbar on functions applied to the constant c:
// c * i * (dbar del omega_{n-1}).
Form gauduchon_adjoint_on_constant(const InvariantComplexManifold& m, const HermitianMetric& g, double c);

}  // namespace starsplit
