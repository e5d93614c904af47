#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "starsplit/manifold.hpp"
#include "starsplit/metric.hpp"

namespace starsplit {

// Published constants for a catalog example, evaluated at the bound parameters.
struct CatalogExpectations {
  std::optional<double> f;
  // Metric classes whose status is stated for the example.
  std::vector<std::pair<std::string, bool>> flags;
  bool rho_zero = false;
  // Eigenvalues of rho relative to omega under the adopted convention.
  std::optional<std::vector<double>> eigenvalues;
  // Eigenvalues as printed alongside the example when they disagree with the
  // computed ones; reported, never used for pass/fail.
  std::optional<std::vector<double>> published_eigenvalues;
  std::vector<std::string> notes;
};

struct CatalogEntry {
  std::string name;
  std::string description;
  InvariantComplexManifold manifold;
  HermitianMetric metric;
  CatalogExpectations expectations;
  std::vector<PullbackMap> isometries;  // structure-compatible maps preserving the metric
};

namespace catalog {

// Family names; "torus_n" stands for torus_1 .. torus_7.
std::vector<std::string> list();

// Builds and validates an entry. Throws InputError for unknown names, unknown
// parameters, |t| >= 1 on calabi_eckmann, or a structure failing validation.
CatalogEntry get(const std::string& name, const Bindings& params = {});

// The isometry diag(u, v, uv) of the Iwasawa manifold; |u| = |v| = 1 for isometries.
PullbackMap iwasawa_rotation(cplx u, cplx v);

// A(t) = |s12|^2 + |s21b|^2 + |s12b|^2 - 2 Re(s11b conj(s22b)).
double iwasawa_deformation_a(cplx s12, cplx s11b, cplx s12b, cplx s21b, cplx s22b);

}  // namespace catalog

}  // namespace starsplit
