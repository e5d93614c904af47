#include "starsplit/search.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>

#include "starsplit/errors.hpp"

namespace starsplit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Evaluation {
  double defect = kInf;
  std::optional<double> f;  // set for feasible points
};

struct RestartResult {
  std::vector<double> x;
  double defect = kInf;
  int evaluations = 0;
  std::vector<SearchTracePoint> trace;
  bool pos = false, neg = false, zero = false;
};

class Objective {
 public:
  Objective(const InvariantComplexManifold& m, const MetricFamily& family, SearchTarget target)
      : m_(m), family_(family), target_(target) {}

  Evaluation operator()(const std::vector<double>& x) const {
    const auto g = family_.metric(x);
    if (!g) return {};
    Evaluation e;
    try {
      e.defect = normalized_defect(m_, *g, target_);
      e.f = f_scalar(m_, *g);
    } catch (const std::exception&) {
      // Numerically degenerate metrics count as infeasible.
      return {};
    }
    if (!std::isfinite(e.defect)) e.defect = kInf;
    return e;
  }

 private:
  const InvariantComplexManifold& m_;
  const MetricFamily& family_;
  SearchTarget target_;
};

// Nelder-Mead with reflection 1, expansion 2, contraction 1/2 and shrink 1/2.
RestartResult nelder_mead(const Objective& objective, std::vector<double> x0, int budget, const SearchOptions& opt,
                          int restart) {
  RestartResult out;
  const std::size_t dim = x0.size();
  auto eval = [&](const std::vector<double>& x) {
    const Evaluation e = objective(x);
    ++out.evaluations;
    if (e.f) {
      const double thr = opt.tol;
      out.pos |= *e.f > thr;
      out.neg |= *e.f < -thr;
      out.zero |= std::abs(*e.f) <= thr;
    }
    if (e.defect < out.defect) {
      out.defect = e.defect;
      out.x = x;
      out.trace.push_back({restart, out.evaluations, out.defect});
    }
    return e.defect;
  };

  std::vector<std::vector<double>> simplex{x0};
  std::vector<double> values{eval(x0)};
  if (values[0] <= opt.target_defect) return out;
  for (std::size_t k = 0; k < dim && out.evaluations < budget; ++k) {
    std::vector<double> x = x0;
    x[k] += opt.initial_step * std::max(1.0, std::abs(x0[k]));
    simplex.push_back(x);
    values.push_back(eval(x));
  }
  if (simplex.size() < dim + 1) return out;

  auto combine = [dim](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> r(dim);
    for (std::size_t k = 0; k < dim; ++k) r[k] = a[k] + t * (b[k] - a[k]);
    return r;
  };

  std::vector<std::size_t> order(dim + 1);
  while (out.evaluations < budget && out.defect > opt.target_defect) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[dim - 1];

    double size = 0.0;
    for (std::size_t j = 0; j <= dim; ++j)
      for (std::size_t k = 0; k < dim; ++k) size = std::max(size, std::abs(simplex[j][k] - simplex[best][k]));
    if (size < 1e-14) break;

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t j = 0; j <= dim; ++j)
      if (j != worst)
        for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[j][k] / double(dim);

    const auto xr = combine(centroid, simplex[worst], -1.0);
    const double fr = eval(xr);
    if (fr < values[best]) {
      const auto xe = combine(centroid, simplex[worst], -2.0);
      const double fe = out.evaluations < budget ? eval(xe) : kInf;
      if (fe < fr) {
        simplex[worst] = xe;
        values[worst] = fe;
      } else {
        simplex[worst] = xr;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = xr;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const auto xc = outside ? combine(centroid, xr, 0.5) : combine(centroid, simplex[worst], 0.5);
    const double fc = out.evaluations < budget ? eval(xc) : kInf;
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = xc;
      values[worst] = fc;
      continue;
    }
    for (std::size_t j = 0; j <= dim && out.evaluations < budget; ++j) {
      if (j == best) continue;
      simplex[j] = combine(simplex[best], simplex[j], 0.5);
      values[j] = eval(simplex[j]);
    }
  }
  return out;
}

// Random feasible start near x0 for restarts after the first.
std::vector<double> perturbed_start(const MetricFamily& family, const std::vector<double>& x0, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<double> x = x0;
    for (int k = 0; k < family.dim(); ++k) x[k] *= std::exp(u(rng));
    for (std::size_t k = family.dim(); k < x.size(); ++k) x[k] += 0.4 * u(rng);
    if (family.metric(x)) return x;
  }
  return x0;
}

const std::vector<std::pair<SearchTarget, std::string>> kTargets{
    {SearchTarget::pluriclosed_star_split, "pluriclosed_star_split"},
    {SearchTarget::closed_star_split, "closed_star_split"},
    {SearchTarget::balanced, "balanced"},
    {SearchTarget::gauduchon, "gauduchon"},
    {SearchTarget::skt, "skt"},
    {SearchTarget::kahler, "kahler"},
    {SearchTarget::astheno_kahler, "astheno_kahler"}};

}  // namespace

MetricFamily::MetricFamily(Kind kind, int n) : kind_(kind), n_(n) {
  if (n < 1 || n > kMaxDim) throw InputError("metric family dimension must be between 1 and 7");
}

int MetricFamily::num_params() const { return kind_ == Kind::diagonal ? n_ : n_ * n_; }

std::string MetricFamily::kind_name() const { return kind_ == Kind::diagonal ? "diagonal" : "full-hermitian"; }

std::vector<double> MetricFamily::params_of(const HermitianMetric& g) const {
  if (g.dim() != n_) throw InputError("metric and family dimensions differ");
  const auto& h = g.matrix();
  std::vector<double> x;
  for (int j = 0; j < n_; ++j) x.push_back(h(j, j).real());
  if (kind_ == Kind::diagonal) {
    if ((h - Eigen::MatrixXcd(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff() > 0.0)
      throw InputError("a diagonal family cannot represent a metric with off-diagonal entries");
    return x;
  }
  for (int j = 0; j < n_; ++j)
    for (int k = j + 1; k < n_; ++k) {
      x.push_back(h(j, k).real());
      x.push_back(h(j, k).imag());
    }
  return x;
}

Eigen::MatrixXcd MetricFamily::matrix(const std::vector<double>& params) const {
  if (int(params.size()) != num_params())
    throw InputError("metric family expects " + std::to_string(num_params()) + " parameters");
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n_, n_);
  for (int j = 0; j < n_; ++j) h(j, j) = params[j];
  if (kind_ == Kind::full_hermitian) {
    std::size_t idx = n_;
    for (int j = 0; j < n_; ++j)
      for (int k = j + 1; k < n_; ++k) {
        h(j, k) = cplx(params[idx], params[idx + 1]);
        h(k, j) = std::conj(h(j, k));
        idx += 2;
      }
  }
  return h;
}

std::optional<HermitianMetric> MetricFamily::metric(const std::vector<double>& params) const {
  for (double p : params)
    if (!std::isfinite(p)) return std::nullopt;
  const Eigen::MatrixXcd h = matrix(params);
  Eigen::LLT<Eigen::MatrixXcd> llt(h);
  if (llt.info() != Eigen::Success) return std::nullopt;
  // Keep a margin so that the metric constructor never sees a borderline matrix.
  if (Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff() <= 1e-12)
    return std::nullopt;
  try {
    return HermitianMetric(h);
  } catch (const InputError&) {
    return std::nullopt;
  }
}

SearchTarget parse_search_target(const std::string& name) {
  for (const auto& [t, s] : kTargets)
    if (s == name) return t;
  if (name == "pss") return SearchTarget::pluriclosed_star_split;
  throw InputError("unknown search target '" + name + "'");
}

std::string search_target_name(SearchTarget t) {
  for (const auto& [target, s] : kTargets)
    if (target == t) return s;
  return "unknown";
}

double reference_norm(const Form& u) { return u.norm(); }

int defect_homogeneity(SearchTarget target, int n) {
  switch (target) {
    case SearchTarget::kahler:
    case SearchTarget::skt:
      return 1;
    case SearchTarget::balanced:
    case SearchTarget::gauduchon:
      return n - 1;
    case SearchTarget::pluriclosed_star_split:
    case SearchTarget::closed_star_split:
    case SearchTarget::astheno_kahler:
      return n - 2;
  }
  return 0;
}

double normalized_defect(const InvariantComplexManifold& m, const HermitianMetric& g, SearchTarget target) {
  const int n = m.dim();
  const double det = g.matrix().determinant().real();
  return class_defect(m, g, target) / std::pow(det, double(defect_homogeneity(target, n)) / double(n));
}

double pss_defect(const InvariantComplexManifold& m, const HermitianMetric& g) {
  return reference_norm(m.del(m.delbar(star_rho(m, g))));
}

double class_defect(const InvariantComplexManifold& m, const HermitianMetric& g, SearchTarget target) {
  const int n = m.dim();
  switch (target) {
    case SearchTarget::pluriclosed_star_split:
      return pss_defect(m, g);
    case SearchTarget::closed_star_split:
      return reference_norm(m.d(star_rho(m, g)));
    case SearchTarget::balanced:
      return reference_norm(m.d(g.omega_power(n - 1)));
    case SearchTarget::gauduchon:
      return reference_norm(m.del(m.delbar(g.omega_power(n - 1))));
    case SearchTarget::skt:
      return reference_norm(m.del(m.delbar(g.omega())));
    case SearchTarget::kahler:
      return reference_norm(m.d(g.omega()));
    case SearchTarget::astheno_kahler:
      return reference_norm(m.del(m.delbar(g.omega_power(n - 2))));
  }
  return kInf;
}

SearchResult search_metric(const InvariantComplexManifold& m, const MetricFamily& family, const SearchOptions& opt,
                           const std::optional<HermitianMetric>& start) {
  if (opt.budget < 1) throw InputError("search budget must be at least 1");
  if (opt.restarts < 1) throw InputError("search needs at least one restart");
  if (family.dim() != m.dim()) throw InputError("metric family and manifold dimensions differ");
  if (m.dim() < 3) throw InputError("the star split apparatus needs complex dimension at least 3");

  const std::vector<double> x0 =
      family.params_of(start ? *start : HermitianMetric::standard(m.dim()));
  if (!family.metric(x0)) throw InputError("the search start is not a positive definite metric");
  const Objective objective(m, family, opt.target);

  // Restart r gets budget/restarts evaluations (the remainder goes to the first ones).
  std::vector<std::future<RestartResult>> futures;
  for (int r = 0; r < opt.restarts; ++r) {
    const int share = opt.budget / opt.restarts + (r < opt.budget % opt.restarts ? 1 : 0);
    if (share == 0) break;
    futures.push_back(std::async(std::launch::async, [&, r, share]() {
      std::mt19937_64 rng(opt.seed * 0x9E3779B97F4A7C15ull + std::uint64_t(r));
      const auto start_x = r == 0 ? x0 : perturbed_start(family, x0, rng);
      return nelder_mead(objective, start_x, share, opt, r);
    }));
  }
  std::vector<RestartResult> results;
  for (auto& f : futures) results.push_back(f.get());

  SearchResult out;
  out.target = search_target_name(opt.target);
  out.family = family.kind_name();
  out.best_defect = kInf;
  for (std::size_t r = 0; r < results.size(); ++r) {
    const auto& res = results[r];
    out.evaluations += res.evaluations;
    out.trace.insert(out.trace.end(), res.trace.begin(), res.trace.end());
    out.f_seen_positive |= res.pos;
    out.f_seen_negative |= res.neg;
    out.f_seen_zero |= res.zero;
    // Strict comparison keeps the lowest restart index on ties.
    if (!res.x.empty() && res.defect < out.best_defect) {
      out.best_defect = res.defect;
      out.best_params = res.x;
      out.best_restart = int(r);
    }
  }
  if (out.best_params.empty()) throw InputError("the metric family produced no positive definite metric");
  out.best_metric = *family.metric(out.best_params);
  out.best_raw_defect = class_defect(m, out.best_metric, opt.target);
  out.report = classify(m, out.best_metric, opt.tol);
  return out;
}

SearchResult search_pss(const InvariantComplexManifold& m, const MetricFamily& family, int budget, std::uint64_t seed) {
  SearchOptions opt;
  opt.budget = budget;
  opt.seed = seed;
  return search_metric(m, family, opt);
}

ScanTable scan(const ScanBuilder& build, const Bindings& base, const std::string& param, const std::vector<cplx>& values,
               double tol) {
  ScanTable table;
  table.param = param;
  // Build once at the base bindings to validate the parameter name.
  const auto probe = build(base);
  table.manifold = probe.first.name();
  const auto& specs = probe.first.parameters();
  if (std::none_of(specs.begin(), specs.end(), [&](const auto& s) { return s.name == param; }))
    throw InputError("unknown parameter '" + param + "' for manifold '" + table.manifold + "'");
  for (const cplx v : values) {
    Bindings b = base;
    b[param] = v;
    const auto [m, g] = build(b);
    table.rows.push_back({v, classify(m, g, tol)});
  }
  return table;
}

ScanTable scan(const InvariantComplexManifold& m, const HermitianMetric& g, const std::string& param,
               const std::vector<cplx>& values, double tol) {
  return scan(
      [&](const Bindings& b) {
        auto bound = m.bind(b);
        validate(bound);
        return std::pair{bound, g};
      },
      m.bindings(), param, values, tol);
}

}  // namespace starsplit
