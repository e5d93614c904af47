#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "starsplit/analysis.hpp"
#include "starsplit/manifold.hpp"
#include "starsplit/metric.hpp"

namespace starsplit {

// Parametrized invariant metrics. Diagonal: params are the n diagonal entries
// (positive cone). Full Hermitian: the n diagonal entries followed by the real and
// imaginary parts of the strictly upper entries, row by row (n^2 params in all).
class MetricFamily {
 public:
  enum class Kind { diagonal, full_hermitian };

  MetricFamily(Kind kind, int n);
  static MetricFamily diagonal(int n) { return {Kind::diagonal, n}; }
  static MetricFamily full_hermitian(int n) { return {Kind::full_hermitian, n}; }

  Kind kind() const { return kind_; }
  int dim() const { return n_; }
  int num_params() const;
  std::string kind_name() const;

  // Parameters of the given metric; throws InputError for a diagonal family
  // and a metric with off-diagonal entries.
  std::vector<double> params_of(const HermitianMetric& g) const;
  // Hermitian matrix of the parameters, whether or not it is positive definite.
  Eigen::MatrixXcd matrix(const std::vector<double>& params) const;
  // The metric when the matrix is positive definite, nothing otherwise.
  std::optional<HermitianMetric> metric(const std::vector<double>& params) const;

 private:
  Kind kind_;
  int n_;
};

// Defect functionals of the metric classes a search can target.
enum class SearchTarget { pluriclosed_star_split, closed_star_split, balanced, gauduchon, skt, kahler, astheno_kahler };

SearchTarget parse_search_target(const std::string& name);
std::string search_target_name(SearchTarget t);

// Euclidean norm of the coefficients in the phi coframe, that is the pointwise norm
// of the fixed reference metric with identity matrix.
double reference_norm(const Form& u);

// ||ddbar(*rho_omega)|| in the reference norm; zero exactly on pluriclosed star
// split metrics.
double pss_defect(const InvariantComplexManifold& m, const HermitianMetric& g);
double class_defect(const InvariantComplexManifold& m, const HermitianMetric& g, SearchTarget target);

// Degree k with class_defect(lambda g) = lambda^k class_defect(g).
int defect_homogeneity(SearchTarget target, int n);
// class_defect / det(H)^{k/n}: invariant under constant rescaling of the metric,
// so the search cannot lower it by shrinking the metric towards zero.
double normalized_defect(const InvariantComplexManifold& m, const HermitianMetric& g, SearchTarget target);

struct SearchOptions {
  int budget = 2000;                  // objective evaluations over all restarts
  int restarts = 4;
  std::uint64_t seed = 1;
  double target_defect = 1e-14;       // stop once the defect is this small
  double initial_step = 0.25;         // simplex edge relative to the parameter scale
  SearchTarget target = SearchTarget::pluriclosed_star_split;
  double tol = kDefaultTol;           // classification tolerance of the final report
};

struct SearchTracePoint {
  int restart = 0;
  int evaluation = 0;   // evaluation count within the restart
  double best_defect = 0.0;
};

struct SearchResult {
  std::string target;
  std::string family;
  std::vector<double> best_params;
  double best_defect = 0.0;      // normalized objective at the minimizer
  double best_raw_defect = 0.0;  // class_defect at the minimizer
  int best_restart = 0;
  int evaluations = 0;
  std::vector<SearchTracePoint> trace;
  // Signs of f seen over all feasible evaluated metrics; recorded, not asserted.
  bool f_seen_positive = false, f_seen_negative = false, f_seen_zero = false;
  bool f_sign_changed() const { return int(f_seen_positive) + int(f_seen_negative) + int(f_seen_zero) > 1; }
  HermitianMetric best_metric{Eigen::MatrixXcd::Identity(1, 1)};
  MetricReport report;  // classify at the minimizer
};

// Simplex descent on normalized_defect with restarts from `start` (default: identity metric). Infeasible
// (non positive definite) points score +infinity. Deterministic for a given seed.
SearchResult search_metric(const InvariantComplexManifold& m, const MetricFamily& family, const SearchOptions& opt,
                           const std::optional<HermitianMetric>& start = std::nullopt);
SearchResult search_pss(const InvariantComplexManifold& m, const MetricFamily& family, int budget, std::uint64_t seed);

struct ScanRow {
  cplx param;
  MetricReport report;
};

struct ScanTable {
  std::string manifold;
  std::string param;
  std::vector<ScanRow> rows;
};

// Builds the manifold and metric for the given parameter bindings.
using ScanBuilder = std::function<std::pair<InvariantComplexManifold, HermitianMetric>(const Bindings&)>;

// One classify row per value of `param`, each on the structure rebuilt with the
// parameter re-bound (other bindings kept). Throws InputError for unknown parameters.
ScanTable scan(const ScanBuilder& build, const Bindings& base, const std::string& param,
               const std::vector<cplx>& values, double tol = kDefaultTol);
ScanTable scan(const InvariantComplexManifold& m, const HermitianMetric& g, const std::string& param,
               const std::vector<cplx>& values, double tol = kDefaultTol);

}  // namespace starsplit
