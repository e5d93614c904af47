#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "starsplit/expr.hpp"
#include "starsplit/form.hpp"
#include "starsplit/metric.hpp"

namespace starsplit {

// c * phi_i ^ phi_j for the (2,0) part or c * phi_i ^ phibar_j for the (1,1) part;
// indices 0-based.
struct StructureTerm {
  int i;
  int j;
  Expr coeff;
};

struct GeneratorStructure {
  std::vector<StructureTerm> holomorphic;  // (2,0) part of d phi_k
  std::vector<StructureTerm> mixed;        // (1,1) part of d phi_k
};

struct ParameterSpec {
  std::string name;
  cplx default_value;
};

// Left-invariant complex structure on a Lie group quotient, given by the
// differentials of a (1,0)-coframe. Immutable; binding parameters returns a new
// instance. Differentials of all basis monomials are tabulated at construction.
class InvariantComplexManifold {
 public:
  InvariantComplexManifold(std::string name, int n, std::vector<ParameterSpec> params,
                           std::vector<GeneratorStructure> structure, const Bindings& values = {});

  InvariantComplexManifold bind(const Bindings& values) const;

  const std::string& name() const;
  int dim() const;
  const std::vector<ParameterSpec>& parameters() const;
  // Effective parameter values (defaults overridden by bindings).
  const Bindings& bindings() const;
  const std::vector<GeneratorStructure>& structure() const;

  const Form& d_phi(int k) const;
  Form d(const Form& u) const;
  Form del(const Form& u) const;
  Form delbar(const Form& u) const;

 private:
  struct Impl;
  static void build_tables(Impl& m);
  std::shared_ptr<const Impl> impl_;
};

Form exterior_d(const InvariantComplexManifold& m, const Form& u);
Form del(const InvariantComplexManifold& m, const Form& u);
Form delbar(const InvariantComplexManifold& m, const Form& u);

// max_k |d(d phi_k)|.
double check_integrability(const InvariantComplexManifold& m);
// max over (2n-1)-monomials b of the top coefficient of d b.
double check_stokes(const InvariantComplexManifold& m);
// Throws InputError when either residual exceeds tol.
void validate(const InvariantComplexManifold& m, double tol = kDefaultTol);

// Integral of the top-degree part against prod_j i phi_j ^ phibar_j (unit volume).
cplx integrate(const InvariantComplexManifold& m, const Form& u);
// <<u, v>> = integral of <u, v> omega_n.
cplx l2_pairing(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& u, const Form& v);

Form adjoint_del(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& u);
Form adjoint_delbar(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& u);
Form laplacian_delbar(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& u);

// Linear map phi with pullback phi^* phi_k = sum_j A_kj phi_j.
class PullbackMap {
 public:
  explicit PullbackMap(const Eigen::MatrixXcd& a);
  static PullbackMap identity(int n);

  int dim() const { return int(a_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return a_; }
  Form apply(const Form& u) const { return sub_->apply(u); }

  // Map of phi o psi, whose pullback is psi^* o phi^*.
  PullbackMap compose(const PullbackMap& psi) const;
  PullbackMap inverse() const;

 private:
  Eigen::MatrixXcd a_;
  std::shared_ptr<const CoframeSubstitution> sub_;
};

Form pullback(const InvariantComplexManifold& m, const PullbackMap& phi, const Form& u);
// max_k |d(phi^* phi_k) - phi^*(d phi_k)|; zero exactly for Lie algebra maps.
double structure_compatibility(const InvariantComplexManifold& m, const PullbackMap& phi);
// Metric of phi^* omega.
HermitianMetric pullback_metric(const PullbackMap& phi, const HermitianMetric& g);

}  // namespace starsplit
