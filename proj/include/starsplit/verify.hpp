#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "starsplit/manifold.hpp"
#include "starsplit/metric.hpp"

namespace starsplit {

struct IdentityEntry {
  std::string id;
  std::string anchor;  // the statement being checked, in words
  double residual = 0.0;
  bool pass = false;
  std::optional<std::string> skipped_reason;  // set when the hypotheses do not hold
  std::optional<std::string> note;            // evaluation error or extra context

  bool skipped() const { return skipped_reason.has_value(); }
};

struct IdentityReport {
  std::string suite;
  std::string manifold;
  std::string metric;
  double tolerance = kDefaultTol;
  std::vector<IdentityEntry> entries;  // sorted by id

  // True when every entry that was evaluated passed.
  bool all_passed() const;
  double max_residual() const;
  int failures() const;
  int skipped() const;
};

struct VerifyOptions {
  double tol = kDefaultTol;
  std::uint64_t seed = 1;
  int random_samples = 4;    // random dense forms per bidegree for pointwise identities
  int integral_samples = 24;  // random eta for the integral identities
};

// Pointwise Hermitian identities: commutation relations, Hodge star and Lefschetz
// identities, torsion identities, and the structural checks on d.
IdentityReport verify_commutation_suite(const InvariantComplexManifold& m, const HermitianMetric& g,
                                        const VerifyOptions& opt = {});

// Identities for T, S, P, R, Q, f and rho; gamma is the second metric of the pair
// identities.
IdentityReport verify_operator_identities(const InvariantComplexManifold& m, const HermitianMetric& omega,
                                          const HermitianMetric& gamma, const VerifyOptions& opt = {});

IdentityReport merge_reports(const IdentityReport& a, const IdentityReport& b);

// Deterministic random inputs.
Form random_form(int n, int p, int q, std::uint64_t seed);
Form random_real_form(int n, int p, std::uint64_t seed);  // real (p,p)-form
HermitianMetric random_metric(int n, std::uint64_t seed);
std::string describe_metric(const HermitianMetric& g);

}  // namespace starsplit
