#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "starsplit/form.hpp"

namespace starsplit {

inline constexpr double kDefaultTol = 1e-10;

// Constant Hermitian metric omega = i sum_{j,k} H_jk phi_j ^ phibar_k, H positive
// definite. Immutable; copies share the cached factor and coframe tables.
class HermitianMetric {
 public:
  explicit HermitianMetric(const Eigen::MatrixXcd& h);
  static HermitianMetric standard(int n, double scale = 1.0);
  static HermitianMetric diagonal(const std::vector<double>& coeffs);

  int dim() const;
  const Eigen::MatrixXcd& matrix() const;
  // X with orthonormal coframe e_m = sum_j X_mj phi_j, so omega = i sum e_m ^ ebar_m.
  const Eigen::MatrixXcd& coframe() const;

  // Rewrites a form given in phi coordinates in terms of e, and back.
  Form to_orthonormal(const Form& u) const;
  Form from_orthonormal(const Form& u) const;

  const Form& omega() const;
  // omega^p / p!, 0 <= p <= n.
  const Form& omega_power(int p) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

Form omega_form(const HermitianMetric& g);
Form omega_power(const HermitianMetric& g, int p);

// <u, v>: sesquilinear, orthonormal monomials in the e coframe.
cplx inner_product(const HermitianMetric& g, const Form& u, const Form& v);
double norm_squared(const HermitianMetric& g, const Form& u);

// Defined by w ^ *conj(u) = <w, u> omega_n. Maps (p,q) to (n-q, n-p).
Form hodge_star(const HermitianMetric& g, const Form& u);
Form lefschetz_L(const HermitianMetric& g, const Form& u);
// Pointwise adjoint of L.
Form lefschetz_lambda(const HermitianMetric& g, const Form& u);

// The (1,1)-form x with omega_k ^ x = y.
Form divide_by_power(const HermitianMetric& g, int k, const Form& y, double tol = kDefaultTol);

struct LefschetzPiece {
  int r;
  Form primitive;
};
// u = sum_r omega_r ^ u_r with Lambda u_r = 0; needs deg u <= n.
std::vector<LefschetzPiece> lefschetz_decompose(const HermitianMetric& g, const Form& u);

// Coefficient matrix A of a (1,1)-form u = i sum A_jk phi_j ^ phibar_k.
Eigen::MatrixXcd hermitian_coefficients(const Form& u);
Form form_from_hermitian(const Eigen::MatrixXcd& a);
// Eigenvalues of the pencil (a, h) for Hermitian a and positive h, descending.
std::vector<double> generalized_eigenvalues(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& h);

// Operators of the standard metric acting on forms written in an orthonormal coframe.
Form standard_star(const Form& u);
Form standard_lambda(const Form& u);
// Coefficient of omega_n on e_N ^ ebar_N.
cplx volume_coefficient(int n);

}  // namespace starsplit
