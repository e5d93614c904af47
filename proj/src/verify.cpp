#include "starsplit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <random>
#include <sstream>

#include "starsplit/analysis.hpp"
#include "starsplit/errors.hpp"
#include "starsplit/operators.hpp"

namespace starsplit {

namespace {

const cplx I(0.0, 1.0);
using Op = std::function<Form(const Form&)>;

struct Outcome {
  double residual = 0.0;
  std::optional<std::string> skip;
};

Outcome skip(std::string reason) { return {std::numeric_limits<double>::quiet_NaN(), std::move(reason)}; }

struct Job {
  std::string id;
  std::string anchor;
  std::function<Outcome(std::mt19937_64&)> run;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

cplx random_coeff(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double re = u(rng);
  return {re, u(rng)};
}

Form random_form_rng(int n, int p, int q, std::mt19937_64& rng) {
  FormAccumulator acc(n);
  for (const auto& mono : bidegree_basis(n, p, q)) acc.add(mono, random_coeff(rng));
  return acc.build();
}

// Every basis monomial of bidegree (p, q), then `count` random dense forms.
std::vector<Form> samples(int n, int p, int q, std::mt19937_64& rng, int count) {
  std::vector<Form> out;
  for (const auto& mono : bidegree_basis(n, p, q)) out.push_back(Form::monomial(n, mono));
  if (!out.empty())
    for (int k = 0; k < count; ++k) out.push_back(random_form_rng(n, p, q, rng));
  return out;
}

double diff(const Form& a, const Form& b) { return (a - b).max_abs(); }

// Max over all bidegrees (p, q) accepted by `keep` of the residual on samples.
double over_bidegrees(int n, std::mt19937_64& rng, int count, const std::function<bool(int, int)>& keep,
                      const std::function<double(const Form&, int, int)>& residual) {
  double r = 0.0;
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q) {
      if (!keep(p, q)) continue;
      for (const auto& u : samples(n, p, q, rng, count)) r = std::max(r, residual(u, p, q));
    }
  return r;
}

bool any_bidegree(int, int) { return true; }

// Matrix of op : (p,q) -> (p2,q2) in the orthonormal monomial basis of g, in which
// the L2 pairing of invariant forms is a constant multiple of the standard one.
Eigen::MatrixXcd e_matrix(const HermitianMetric& g, const Op& op, int p, int q, int p2, int q2) {
  const int n = g.dim();
  const auto src = bidegree_basis(n, p, q);
  Eigen::MatrixXcd mat(bidegree_basis(n, p2, q2).size(), src.size());
  for (std::size_t c = 0; c < src.size(); ++c)
    mat.col(Eigen::Index(c)) = coefficient_vector(g.to_orthonormal(op(g.from_orthonormal(Form::monomial(n, src[c])))), p2, q2);
  return mat;
}

double matrix_residual(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

// Matrix of op : (p,q) -> (p2,q2) in the phi monomial basis.
Eigen::MatrixXcd phi_matrix(int n, const Op& op, int p, int q, int p2, int q2) {
  const auto src = bidegree_basis(n, p, q);
  Eigen::MatrixXcd mat(bidegree_basis(n, p2, q2).size(), src.size());
  for (std::size_t c = 0; c < src.size(); ++c)
    mat.col(Eigen::Index(c)) = coefficient_vector(op(Form::monomial(n, src[c])), p2, q2);
  return mat;
}

// Orthonormal basis of the numerical kernel of a matrix.
Eigen::MatrixXcd kernel(const Eigen::MatrixXcd& a) {
  if (a.cols() == 0) return Eigen::MatrixXcd(0, 0);
  if (a.rows() == 0) return Eigen::MatrixXcd::Identity(a.cols(), a.cols());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double thr = 1e-9 * std::max(1.0, s.size() ? s(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) rank += s(k) > thr;
  return svd.matrixV().rightCols(a.cols() - rank);
}

IdentityReport run_jobs(std::vector<Job> jobs, const std::string& suite, const InvariantComplexManifold& m,
                        const std::string& metric, const VerifyOptions& opt) {
  std::vector<std::future<IdentityEntry>> futures;
  futures.reserve(jobs.size());
  for (auto& job : jobs) {
    futures.push_back(std::async(std::launch::async, [job = std::move(job), &opt]() {
      IdentityEntry e;
      e.id = job.id;
      e.anchor = job.anchor;
      std::mt19937_64 rng(opt.seed ^ fnv1a(job.id));
      try {
        const Outcome o = job.run(rng);
        e.residual = o.residual;
        e.skipped_reason = o.skip;
        e.pass = !o.skip && o.residual < opt.tol;
      } catch (const std::exception& ex) {
        e.residual = std::numeric_limits<double>::infinity();
        e.pass = false;
        e.note = std::string("evaluation failed: ") + ex.what();
      }
      return e;
    }));
  }
  IdentityReport r;
  r.suite = suite;
  r.manifold = m.name();
  r.metric = metric;
  r.tolerance = opt.tol;
  for (auto& f : futures) r.entries.push_back(f.get());
  std::sort(r.entries.begin(), r.entries.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return r;
}

double sign_pow(int k) { return (k & 1) ? -1.0 : 1.0; }

cplx i_pow(int k) {
  static const cplx powers[4] = {1.0, I, -1.0, -I};
  return powers[((k % 4) + 4) % 4];
}

}  // namespace

bool IdentityReport::all_passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.skipped() || e.pass; });
}

double IdentityReport::max_residual() const {
  double r = 0.0;
  for (const auto& e : entries)
    if (!e.skipped()) r = std::max(r, e.residual);
  return r;
}

int IdentityReport::failures() const {
  return int(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return !e.skipped() && !e.pass; }));
}

int IdentityReport::skipped() const {
  return int(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.skipped(); }));
}

IdentityReport merge_reports(const IdentityReport& a, const IdentityReport& b) {
  IdentityReport r = a;
  r.suite = a.suite + "+" + b.suite;
  r.entries.insert(r.entries.end(), b.entries.begin(), b.entries.end());
  std::sort(r.entries.begin(), r.entries.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
  return r;
}

Form random_form(int n, int p, int q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_form_rng(n, p, q, rng);
}

Form random_real_form(int n, int p, std::uint64_t seed) {
  const Form u = random_form(n, p, p, seed);
  return 0.5 * (u + conjugate(u));
}

HermitianMetric random_metric(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::MatrixXcd b(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) b(j, k) = 0.5 * random_coeff(rng);
  return HermitianMetric(b * b.adjoint() + Eigen::MatrixXcd::Identity(n, n));
}

std::string describe_metric(const HermitianMetric& g) {
  std::ostringstream os;
  os << "H = [";
  for (int j = 0; j < g.dim(); ++j) {
    os << (j ? "; " : "");
    for (int k = 0; k < g.dim(); ++k) os << (k ? ", " : "") << format_complex(g.matrix()(j, k));
  }
  os << "]";
  return os.str();
}

IdentityReport verify_commutation_suite(const InvariantComplexManifold& m, const HermitianMetric& g,
                                        const VerifyOptions& opt) {
  if (m.dim() != g.dim()) throw InputError("metric and manifold dimensions differ");
  const int n = m.dim();
  const int rs = opt.random_samples;
  const Form& w = g.omega();
  const Form dw = m.del(w);
  const Form dbw = m.delbar(w);
  const Op del = [&m](const Form& u) { return m.del(u); };
  const Op delbar = [&m](const Form& u) { return m.delbar(u); };
  const Op lam = [&g](const Form& u) { return lefschetz_lambda(g, u); };
  const Op ell = [&g](const Form& u) { return lefschetz_L(g, u); };
  const Op star = [&g](const Form& u) { return hodge_star(g, u); };
  const Op tau = [&m, &g](const Form& u) { return torsion_tau(m, g, u); };
  const Op taubar = [&m, &g](const Form& u) { return torsion_tau_bar(m, g, u); };
  const Op del_star = [&m, &g](const Form& u) { return adjoint_del(m, g, u); };
  const Op delbar_star = [&m, &g](const Form& u) { return adjoint_delbar(m, g, u); };
  auto deg_le_n = [n](int p, int q) { return p + q <= n; };

  std::vector<Job> jobs;
  auto add = [&jobs](std::string id, std::string anchor, std::function<Outcome(std::mt19937_64&)> fn) {
    jobs.push_back({std::move(id), std::move(anchor), std::move(fn)});
  };

  add("star.one", "*1 = omega_n", [&](auto&) { return Outcome{diff(star(Form::scalar(n, 1.0)), g.omega_power(n))}; });
  add("star.omega", "*omega = omega_{n-1}", [&](auto&) { return Outcome{diff(star(w), g.omega_power(n - 1))}; });
  add("star.involution", "** = (-1)^k on k-forms", [&](auto& rng) {
    return Outcome{over_bidegrees(n, rng, rs, any_bidegree,
                                  [&](const Form& u, int p, int q) { return diff(star(star(u)), sign_pow(p + q) * u); })};
  });
  add("star.isometry", "<*u, *v> = <u, v>", [&](auto& rng) {
    return Outcome{over_bidegrees(n, rng, rs, any_bidegree, [&](const Form& u, int p, int q) {
      const Form v = random_form_rng(n, p, q, rng);
      return std::abs(inner_product(g, star(u), star(v)) - inner_product(g, u, v));
    })};
  });
  add("star.defining_identity", "w ^ *conj(u) = <w, u> omega_n", [&](auto& rng) {
    return Outcome{over_bidegrees(n, rng, rs, any_bidegree, [&](const Form& u, int p, int q) {
      const Form v = random_form_rng(n, p, q, rng);
      return diff(wedge(v, star(conjugate(u))), inner_product(g, v, u) * g.omega_power(n));
    })};
  });
  add("lefschetz.lambda_omega", "Lambda omega = n", [&](auto&) { return Outcome{diff(lam(w), Form::scalar(n, double(n)))}; });
  add("lefschetz.commutator", "[Lambda, L] = (n - k) Id on k-forms", [&](auto& rng) {
    return Outcome{over_bidegrees(n, rng, rs, any_bidegree, [&](const Form& u, int p, int q) {
      return diff(lam(ell(u)) - ell(lam(u)), double(n - p - q) * u);
    })};
  });
  for (int r : {2, 3}) {
    add("lefschetz.power_commutator_r" + std::to_string(r), "[L^r, Lambda] = r(k - n + r - 1) L^{r-1} on k-forms",
        [&, r](auto& rng) {
          auto lpow = [&](Form u, int k) {
            for (int j = 0; j < k; ++j) u = ell(u);
            return u;
          };
          return Outcome{over_bidegrees(n, rng, rs, any_bidegree, [&](const Form& u, int p, int q) {
            const double c = double(r * (p + q - n + r - 1));
            return diff(lpow(lam(u), r) - lam(lpow(u, r)), c * lpow(u, r - 1));
          })};
        });
  }
  add("lefschetz.star_l", "*L = Lambda*", [&](auto& rng) {
    return Outcome{over_bidegrees(n, rng, rs, any_bidegree,
                                  [&](const Form& u, int, int) { return diff(star(ell(u)), lam(star(u))); })};
  });
  add("lefschetz.star_lambda", "*Lambda = L*", [&](auto& rng) {
    return Outcome{over_bidegrees(n, rng, rs, any_bidegree,
                                  [&](const Form& u, int, int) { return diff(star(lam(u)), ell(star(u))); })};
  });
  add("lefschetz.decomposition", "u = sum_r omega_r ^ u_r with Lambda u_r = 0 (degree <= n)", [&](auto& rng) {
    return Outcome{over_bidegrees(n, rng, rs, deg_le_n, [&](const Form& u, int, int) {
      Form rebuilt(n);
      double r = 0.0;
      for (const auto& piece : lefschetz_decompose(g, u)) {
        rebuilt = rebuilt + wedge(g.omega_power(piece.r), piece.primitive);
        r = std::max(r, lam(piece.primitive).max_abs());
      }
      return std::max(r, diff(rebuilt, u));
    })};
  });
  add("star.primitive", "*v = (-1)^{k(k+1)/2} i^{p-q} omega_{n-p-q} ^ v for primitive (p,q)-forms v", [&](auto& rng) {
    return Outcome{over_bidegrees(n, rng, rs, deg_le_n, [&](const Form& u, int p, int q) {
      const Form v = lefschetz_decompose(g, u).front().primitive;
      const int k = p + q;
      const cplx c = sign_pow(k * (k + 1) / 2) * i_pow(p - q);
      return std::max(lam(v).max_abs(), diff(star(v), c * wedge(g.omega_power(n - k), v)));
    })};
  });
  add("star.complementary_product", "alpha ^ beta = *alpha ^ *beta when deg alpha + deg beta = 2n", [&](auto& rng) {
    return Outcome{over_bidegrees(n, rng, rs, any_bidegree, [&](const Form& u, int p, int q) {
      const Form v = random_form_rng(n, n - p, n - q, rng);
      return diff(wedge(u, v), wedge(star(u), star(v)));
    })};
  });
  add("star.trace_identity", "omega ^ Gamma = *Gamma ^ omega_{n-1} for real (n-1,n-1)-forms Gamma", [&](auto& rng) {
    double r = 0.0;
    for (const auto& u : samples(n, n - 1, n - 1, rng, rs)) {
      const Form big = 0.5 * (u + conjugate(u));
      r = std::max(r, diff(wedge(w, big), wedge(star(big), g.omega_power(n - 1))));
    }
    return Outcome{r};
  });
  add("division.inverse", "(omega_k ^ .)^{-1}(omega_k ^ x) = x on (1,1)-forms, 1 <= k <= n-2", [&](auto& rng) {
    double r = 0.0;
    for (int k = 1; k <= n - 2; ++k)
      for (const auto& x : samples(n, 1, 1, rng, rs))
        r = std::max(r, diff(divide_by_power(g, k, wedge(g.omega_power(k), x), opt.tol), x));
    return Outcome{r};
  });

  // Hermitian commutation relations; (i) and (ii) compare true L2 adjoints.
  add("hermitian.i", "(del + tau)^* = i[Lambda, dbar]", [&](auto&) {
    double r = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q <= n; ++q) {
        const auto a = e_matrix(g, [&](const Form& u) { return del(u) + tau(u); }, p, q, p + 1, q);
        const auto b = e_matrix(g, [&](const Form& u) { return I * (lam(delbar(u)) - delbar(lam(u))); }, p + 1, q, p, q);
        r = std::max(r, matrix_residual(a.adjoint(), b));
      }
    return Outcome{r};
  });
  add("hermitian.ii", "(dbar + taubar)^* = -i[Lambda, del]", [&](auto&) {
    double r = 0.0;
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q < n; ++q) {
        const auto a = e_matrix(g, [&](const Form& u) { return delbar(u) + taubar(u); }, p, q, p, q + 1);
        const auto b = e_matrix(g, [&](const Form& u) { return -I * (lam(del(u)) - del(lam(u))); }, p, q + 1, p, q);
        r = std::max(r, matrix_residual(a.adjoint(), b));
      }
    return Outcome{r};
  });
  add("hermitian.iii", "del + tau = -i[dbar^*, L]", [&](auto& rng) {
    return Outcome{over_bidegrees(n, rng, rs, any_bidegree, [&](const Form& u, int, int) {
      return diff(del(u) + tau(u), -I * (delbar_star(ell(u)) - ell(delbar_star(u))));
    })};
  });
  add("hermitian.iv", "dbar + taubar = i[del^*, L]", [&](auto& rng) {
    return Outcome{over_bidegrees(n, rng, rs, any_bidegree, [&](const Form& u, int, int) {
      return diff(delbar(u) + taubar(u), I * (del_star(ell(u)) - ell(del_star(u))));
    })};
  });
  add("adjoint.del_star_formula", "the L2 adjoint of del is -* dbar *", [&](auto&) {
    double r = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q <= n; ++q)
        r = std::max(r, matrix_residual(e_matrix(g, del, p, q, p + 1, q).adjoint(), e_matrix(g, del_star, p + 1, q, p, q)));
    return Outcome{r};
  });
  add("adjoint.delbar_star_formula", "the L2 adjoint of dbar is -* del *", [&](auto&) {
    double r = 0.0;
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q < n; ++q)
        r = std::max(r, matrix_residual(e_matrix(g, delbar, p, q, p, q + 1).adjoint(), e_matrix(g, delbar_star, p, q + 1, p, q)));
    return Outcome{r};
  });
  add("adjoint.l2_pairing", "<<del u, v>> = <<u, del^* v>> for the invariant L2 pairing", [&](auto& rng) {
    return Outcome{over_bidegrees(n, rng, rs, [n](int p, int) { return p < n; }, [&](const Form& u, int p, int q) {
      const Form v = random_form_rng(n, p + 1, q, rng);
      return std::abs(l2_pairing(m, g, del(u), v) - l2_pairing(m, g, u, del_star(v)));
    })};
  });
  add("torsion.taubar_adjoint_omega", "-(1/2) taubar^* omega = dbar^* omega", [&](auto&) {
    const auto a = e_matrix(g, taubar, 1, 0, 1, 1);
    const Eigen::VectorXcd v = a.adjoint() * coefficient_vector(g.to_orthonormal(w), 1, 1);
    const Form taubar_star_w = g.from_orthonormal(from_coefficients(n, 1, 0, v));
    return Outcome{diff(-0.5 * taubar_star_w, delbar_star(w))};
  });
  add("torsion.dbar_star_omega", "dbar^* omega = i Lambda(del omega)", [&](auto&) {
    return Outcome{diff(delbar_star(w), I * lam(dw))};
  });
  add("torsion.balanced_criterion", "omega balanced <=> taubar^* omega = 0 (defect comparison)", [&](auto&) {
    const auto a = e_matrix(g, taubar, 1, 0, 1, 1);
    const Eigen::VectorXcd v = a.adjoint() * coefficient_vector(g.to_orthonormal(w), 1, 1);
    const bool balanced = m.d(g.omega_power(n - 1)).max_abs() < opt.tol;
    const bool vanishes = v.size() == 0 || v.cwiseAbs().maxCoeff() < opt.tol;
    return Outcome{balanced == vanishes ? 0.0 : 1.0};
  });

  add("structure.integrability", "d^2 = 0 on the generators", [&](auto&) { return Outcome{check_integrability(m)}; });
  add("structure.stokes", "the integral of d beta vanishes for invariant (2n-1)-forms", [&](auto& rng) {
    double r = check_stokes(m);
    for (int k = 0; k < rs; ++k) {
      const Form beta = random_form_rng(n, n - 1, n, rng) + random_form_rng(n, n, n - 1, rng);
      r = std::max(r, std::abs(integrate(m, m.d(beta))));
    }
    return Outcome{r};
  });
  add("structure.del_identities", "del^2 = 0, dbar^2 = 0, del dbar + dbar del = 0", [&](auto& rng) {
    return Outcome{over_bidegrees(n, rng, 1, any_bidegree, [&](const Form& u, int, int) {
      return std::max({del(del(u)).max_abs(), delbar(delbar(u)).max_abs(), (del(delbar(u)) + delbar(del(u))).max_abs()});
    })};
  });
  add("structure.conjugation", "conj(del u) = dbar(conj u)", [&](auto& rng) {
    return Outcome{over_bidegrees(n, rng, 1, any_bidegree,
                                  [&](const Form& u, int, int) { return diff(conjugate(del(u)), delbar(conjugate(u))); })};
  });
  add("laplacian.kernel", "ker Delta'' = ker dbar intersected with ker dbar^*", [&](auto&) {
    double r = 0.0;
    const Op lap = [&](const Form& u) { return laplacian_delbar(m, g, u); };
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q) {
        const auto k_lap = kernel(phi_matrix(n, lap, p, q, p, q));
        const auto a = phi_matrix(n, delbar, p, q, p, q + 1);
        const auto b = phi_matrix(n, delbar_star, p, q, p, q - 1);
        Eigen::MatrixXcd stacked(a.rows() + b.rows(), a.cols());
        stacked << a, b;
        const auto k_both = kernel(stacked);
        if (k_lap.cols() != k_both.cols()) r = std::max(r, 1.0);
        for (Eigen::Index c = 0; c < k_lap.cols(); ++c) {
          const Form v = from_coefficients(n, p, q, k_lap.col(c));
          r = std::max({r, delbar(v).max_abs(), delbar_star(v).max_abs()});
        }
      }
    return Outcome{r};
  });

  return run_jobs(std::move(jobs), "commutation", m, describe_metric(g), opt);
}

IdentityReport verify_operator_identities(const InvariantComplexManifold& m, const HermitianMetric& omega,
                                          const HermitianMetric& gamma, const VerifyOptions& opt) {
  const int n = m.dim();
  if (omega.dim() != n || gamma.dim() != n) throw InputError("metric and manifold dimensions differ");
  if (n < 3) throw InputError("the operator identities need complex dimension at least 3");
  const int rs = opt.random_samples;
  const Form& w = omega.omega();
  const Form& w1 = omega.omega_power(n - 1);
  const double vol = integrate(m, omega.omega_power(n)).real();
  const double stokes = check_stokes(m);
  const bool unimodular = stokes < opt.tol;
  const bool balanced = m.d(w1).max_abs() < opt.tol * (1.0 + defect_scale(m, omega));
  const bool kahler = m.d(w).max_abs() < opt.tol * (1.0 + defect_scale(m, omega));
  const std::string need_unimodular =
      "the invariant Stokes check fails (residual " + std::to_string(stokes) + "), so integration by parts is not exact";
  const std::string need_balanced = "omega is not balanced";
  const std::string need_n4 = "needs complex dimension at least 4";
  const Form iddbar_w2 = i_ddbar(m, omega.omega_power(n - 2));
  const Form dw_dbw = (I * wedge(m.del(w), m.delbar(w)));
  auto lam = [&omega](const Form& u, int k = 1) { return lambda_power(omega, u, k); };
  auto sval = [](const Form& u) { return scalar_value(u); };
  auto tr = [&](const Form& top) { return integrate(m, top); };

  std::vector<Job> jobs;
  auto add = [&jobs](std::string id, std::string anchor, std::function<Outcome(std::mt19937_64&)> fn) {
    jobs.push_back({std::move(id), std::move(anchor), std::move(fn)});
  };

  for (const auto* gm : {&omega, &gamma}) {
    const std::string tag = gm == &omega ? "omega" : "gamma";
    const HermitianMetric& g = *gm;
    add("ts.t_closed_form_" + tag, "T = (omega_{n-2} ^ .)^{-1} o * equals -alpha + (Lambda alpha)/(n-1) omega",
        [&, gm](auto& rng) {
          double r = 0.0;
          for (const auto& a : samples(n, 1, 1, rng, rs)) r = std::max(r, diff(T(*gm, a), T_composite(*gm, a)));
          return Outcome{r};
        });
    add("ts.s_closed_form_" + tag, "S = * o (omega_{n-2} ^ .)^{-1} equals -Omega + Lambda(*Omega)/(n-1) omega_{n-1}",
        [&, gm](auto& rng) {
          double r = 0.0;
          for (const auto& a : samples(n, n - 1, n - 1, rng, rs)) r = std::max(r, diff(S(*gm, a), S_composite(*gm, a)));
          return Outcome{r};
        });
    add("ts.s_star_equals_star_t_" + tag, "S o * = * o T on (1,1)-forms", [&, gm](auto& rng) {
      double r = 0.0;
      for (const auto& a : samples(n, 1, 1, rng, rs))
        r = std::max(r, diff(S(*gm, hodge_star(*gm, a)), hodge_star(*gm, T(*gm, a))));
      return Outcome{r};
    });
    add("ts.star_s_equals_division_" + tag, "* o S = T o * = (omega_{n-2} ^ .)^{-1} on (n-1,n-1)-forms",
        [&, gm](auto& rng) {
          double r = 0.0;
          for (const auto& a : samples(n, n - 1, n - 1, rng, rs)) {
            const Form div = divide_by_power(*gm, n - 2, a, opt.tol);
            r = std::max({r, diff(hodge_star(*gm, S(*gm, a)), div), diff(T(*gm, hodge_star(*gm, a)), div)});
          }
          return Outcome{r};
        });
    add("ts.values_on_omega_" + tag, "T(omega) = omega/(n-1) and S(omega_{n-1}) = omega_{n-1}/(n-1)", [&, gm](auto&) {
      const double c = 1.0 / double(n - 1);
      return Outcome{std::max(diff(T(*gm, gm->omega()), c * gm->omega()),
                              diff(S(*gm, gm->omega_power(n - 1)), c * gm->omega_power(n - 1)))};
    });
    (void)g;
  }

  add("p.trace_formula", "P(alpha) = Lambda(i ddbar alpha) - Lambda^2(i ddbar alpha) omega / (2(n-1))", [&](auto& rng) {
    double r = 0.0;
    for (const auto& a : samples(n, 1, 1, rng, rs)) r = std::max(r, diff(P(m, omega, a), P_trace(m, omega, a)));
    return Outcome{r};
  });
  add("p.division_of_gamma_omega", "(omega_{n-2} ^ .)^{-1}(Gamma ^ omega_{n-3}) = Lambda Gamma - Lambda^2 Gamma omega / (2(n-1))",
      [&](auto& rng) {
        double r = 0.0;
        for (const auto& big : samples(n, 2, 2, rng, rs)) {
          const Form lhs = divide_by_power(omega, n - 2, wedge(big, omega.omega_power(n - 3)), opt.tol);
          const Form rhs = lam(big) - (sval(lam(big, 2)) / (2.0 * double(n - 1))) * w;
          r = std::max(r, diff(lhs, rhs));
        }
        return Outcome{r};
      });
  add("p.double_trace", "(1/2) Lambda^2 Gamma = (Gamma ^ omega_{n-2}) / omega_n on (2,2)-forms", [&](auto& rng) {
    double r = 0.0;
    for (const auto& big : samples(n, 2, 2, rng, rs))
      r = std::max(r, std::abs(0.5 * sval(lam(big, 2)) - top_ratio(wedge(big, omega.omega_power(n - 2)), omega.omega_power(n))));
    return Outcome{r};
  });
  add("p.wedge_omega_n1", "P(alpha) ^ omega_{n-1} = ((n-2)/(n-1)) i ddbar alpha ^ omega_{n-2}", [&](auto& rng) {
    double r = 0.0;
    const double c = double(n - 2) / double(n - 1);
    for (const auto& a : samples(n, 1, 1, rng, rs))
      r = std::max(r, diff(wedge(P(m, omega, a), w1), c * wedge(i_ddbar(m, a), omega.omega_power(n - 2))));
    return Outcome{r};
  });
  add("p.trace", "Lambda(P(alpha)) = ((n-2)/(2(n-1))) Lambda^2(i ddbar alpha)", [&](auto& rng) {
    double r = 0.0;
    const double c = double(n - 2) / (2.0 * double(n - 1));
    for (const auto& a : samples(n, 1, 1, rng, rs))
      r = std::max(r, std::abs(sval(lam(P(m, omega, a))) - c * sval(lam(i_ddbar(m, a), 2))));
    return Outcome{r};
  });
  add("star.gamma_omega_n3", "*(Gamma ^ omega_{n-3}) = -Lambda Gamma + (1/2)(Lambda^2 Gamma) omega on (2,2)-forms",
      [&](auto& rng) {
        double r = 0.0;
        for (const auto& big : samples(n, 2, 2, rng, rs))
          r = std::max(r, diff(hodge_star(omega, wedge(big, omega.omega_power(n - 3))),
                               -lam(big) + (0.5 * sval(lam(big, 2))) * w));
        return Outcome{r};
      });
  add("star.omega33_omega_n4",
      "*(Omega ^ omega_{n-4}) = -(1/2!) Lambda^2 Omega + (1/3!)(Lambda^3 Omega) omega on (3,3)-forms", [&](auto& rng) {
        if (n < 4) return skip(need_n4);
        double r = 0.0;
        for (const auto& big : samples(n, 3, 3, rng, rs))
          r = std::max(r, diff(hodge_star(omega, wedge(big, omega.omega_power(n - 4))),
                               -0.5 * lam(big, 2) + (sval(lam(big, 3)) / 6.0) * w));
        return Outcome{r};
      });
  add("p.division_of_omega33",
      "(omega_{n-2} ^ .)^{-1}(Omega ^ omega_{n-4}) = (1/2) Lambda^2 Omega - Lambda^3 Omega omega / (3(n-1))",
      [&](auto& rng) {
        if (n < 4) return skip(need_n4);
        double r = 0.0;
        for (const auto& big : samples(n, 3, 3, rng, rs)) {
          const Form lhs = divide_by_power(omega, n - 2, wedge(big, omega.omega_power(n - 4)), opt.tol);
          const Form rhs = 0.5 * lam(big, 2) - (sval(lam(big, 3)) / (3.0 * double(n - 1))) * w;
          r = std::max(r, diff(lhs, rhs));
        }
        return Outcome{r};
      });
  add("f.two_trace_formula",
      "f = ((n-2)/2!) Lambda^2(i ddbar omega) + ((n-3)/3!) Lambda^3(i del omega ^ dbar omega)", [&](auto&) {
        const double f = f_scalar(m, omega);
        cplx v = double(n - 2) / 2.0 * sval(lam(i_ddbar(m, w), 2));
        // At n = 3 the cubic term carries a zero prefactor and is not formed.
        if (n > 3) v += double(n - 3) / 6.0 * sval(lam(dw_dbw, 3));
        return Outcome{std::abs(v - f)};
      });
  add("f.p_trace_formula", "f = (n-1) Lambda(P(omega)) + ((n-3)/3!) Lambda^3(i del omega ^ dbar omega)", [&](auto&) {
    const double f = f_scalar(m, omega);
    cplx v = double(n - 1) * sval(lam(P(m, omega, w)));
    if (n > 3) v += double(n - 3) / 6.0 * sval(lam(dw_dbw, 3));
    return Outcome{std::abs(v - f)};
  });
  add("f.trace_bridge", "((n-2)/2) Lambda^2(i ddbar omega) = (n-1) Lambda(P(omega))", [&](auto&) {
    return Outcome{std::abs(double(n - 2) / 2.0 * sval(lam(i_ddbar(m, w), 2)) - double(n - 1) * sval(lam(P(m, omega, w))))};
  });
  add("rho.p_formula",
      "rho = P(omega) + (1/2) Lambda^2(i del omega ^ dbar omega) - Lambda^3(i del omega ^ dbar omega) omega / (3(n-1))",
      [&](auto&) {
        const Form rhs = P(m, omega, w) + 0.5 * lam(dw_dbw, 2) - (sval(lam(dw_dbw, 3)) / (3.0 * double(n - 1))) * w;
        return Outcome{diff(rho(m, omega), rhs)};
      });
  add("rho.division_definition", "i ddbar omega_{n-2} = omega_{n-2} ^ rho", [&](auto&) {
    return Outcome{diff(wedge(omega.omega_power(n - 2), rho(m, omega)), iddbar_w2)};
  });

  // Integral identities for the pair (omega, gamma).
  const Form rho_pair = divide_by_power(gamma, n - 2, iddbar_w2, opt.tol);
  const Form star_rho_pair = hodge_star(gamma, rho_pair);
  auto eta_samples = [&](std::mt19937_64& rng) {
    std::vector<Form> out{gamma.omega(), w, rho_pair};
    for (int k = 0; k < opt.integral_samples; ++k) out.push_back(random_form_rng(n, 1, 1, rng));
    return out;
  };
  add("integral.p_link",
      "int eta ^ *_gamma rho_{omega,gamma} = ((n-1)/(n-2)) int P_omega(T_gamma eta) ^ omega_{n-1}", [&](auto& rng) {
        if (!unimodular) return skip(need_unimodular);
        double r = 0.0;
        const double c = double(n - 1) / double(n - 2);
        for (const auto& eta : eta_samples(rng))
          r = std::max(r, std::abs(tr(wedge(eta, star_rho_pair)) - c * tr(wedge(P(m, omega, T(gamma, eta)), w1))));
        return Outcome{r};
      });
  add("integral.p_link_ddbar", "int P_omega(T_gamma(i ddbar phi)) ^ omega_{n-1} = 0 for invariant functions phi",
      [&](auto& rng) {
        if (!unimodular) return skip(need_unimodular);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        const Form phi = Form::scalar(n, cplx(u(rng), u(rng)));
        return Outcome{std::abs(tr(wedge(P(m, omega, T(gamma, i_ddbar(m, phi))), w1)))};
      });
  add("integral.sign_argument",
      "a semi-definite Theta with int Theta ^ omega_{n-1} = 0 has vanishing eigenvalues", [&](auto& rng) {
        // Theta ^ omega_{n-1} = Lambda(Theta) omega_n, so the trace of a semi-definite
        // Theta with vanishing integral is zero and so is every eigenvalue.
        std::vector<Form> thetas{P(m, omega, T(gamma, i_ddbar(m, Form::scalar(n, 1.0))))};
        for (int k = 0; k < opt.integral_samples; ++k) {
          const Form a = random_real_form(n, 1, rng());
          const Form pa = P(m, omega, a);
          const Form real_pa = 0.5 * (pa + conjugate(pa));
          thetas.push_back(real_pa);
          const auto ev = generalized_eigenvalues(hermitian_coefficients(real_pa), omega.matrix());
          // Shift to the nearest semi-definite form with vanishing integral when possible.
          thetas.push_back(real_pa - (ev.back() + 0.0) * w);
        }
        double r = 0.0;
        for (const auto& theta : thetas) {
          const auto ev = generalized_eigenvalues(hermitian_coefficients(theta), omega.matrix());
          const bool semidefinite = ev.back() > -opt.tol || ev.front() < opt.tol;
          const double integral = std::abs(tr(wedge(theta, w1)));
          if (semidefinite && integral < opt.tol)
            for (double e : ev) r = std::max(r, std::abs(e));
        }
        return Outcome{r};
      });
  add("integral.r_vanishes", "int R(alpha) ^ omega_{n-1} = 0", [&](auto& rng) {
    if (!unimodular) return skip(need_unimodular);
    double r = 0.0;
    for (const auto& a : samples(n, 1, 1, rng, rs)) r = std::max(r, std::abs(tr(wedge(R(m, omega, a), w1))));
    return Outcome{r};
  });
  add("integral.dbar_star_trace", "int dbar^* Lambda(dbar alpha) omega ^ omega_{n-1} = 0", [&](auto& rng) {
    if (!unimodular) return skip(need_unimodular);
    double r = 0.0;
    for (const auto& a : samples(n, 1, 1, rng, rs)) {
      const cplx c = sval(adjoint_delbar(m, omega, lam(m.delbar(a))));
      r = std::max(r, std::abs(tr(wedge(c * w, w1))));
    }
    return Outcome{r};
  });
  add("integral.balanced_vanishings",
      "omega balanced: int i del Lambda(dbar alpha) ^ omega_{n-1} = 0 = int i del^*(omega ^ dbar^* alpha) ^ omega_{n-1}",
      [&](auto& rng) {
        if (!unimodular) return skip(need_unimodular);
        if (!balanced) return skip(need_balanced);
        double r = 0.0;
        for (const auto& a : samples(n, 1, 1, rng, rs)) {
          const Form t1 = I * m.del(lam(m.delbar(a)));
          const Form t2 = I * adjoint_del(m, omega, wedge(w, adjoint_delbar(m, omega, a)));
          r = std::max({r, std::abs(tr(wedge(t1, w1))), std::abs(tr(wedge(t2, w1)))});
        }
        return Outcome{r};
      });
  add("integral.q_minus_p", "omega balanced: int (Q(alpha) - P(alpha)) ^ omega_{n-1} = 0", [&](auto& rng) {
    if (!unimodular) return skip(need_unimodular);
    if (!balanced) return skip(need_balanced);
    double r = 0.0;
    for (const auto& a : samples(n, 1, 1, rng, rs))
      r = std::max(r, std::abs(tr(wedge(Q(m, omega, a) - P(m, omega, a), w1))));
    return Outcome{r};
  });
  add("integral.q_link",
      "omega balanced: int eta ^ *_gamma rho_{omega,gamma} = ((n-1)/(n-2)) int Q_omega(T_gamma eta) ^ omega_{n-1}",
      [&](auto& rng) {
        if (!unimodular) return skip(need_unimodular);
        if (!balanced) return skip(need_balanced);
        double r = 0.0;
        const double c = double(n - 1) / double(n - 2);
        for (const auto& eta : eta_samples(rng))
          r = std::max(r, std::abs(tr(wedge(eta, star_rho_pair)) - c * tr(wedge(Q(m, omega, T(gamma, eta)), w1))));
        return Outcome{r};
      });
  add("q.on_omega", "Q(omega) = P(omega) + (n/(n-1)) R(omega) + del del^* omega - i del^*(omega ^ dbar^* omega)",
      [&](auto&) {
        const Form rhs = P(m, omega, w) + (double(n) / double(n - 1)) * R(m, omega, w) +
                         m.del(adjoint_del(m, omega, w)) - I * adjoint_del(m, omega, wedge(w, adjoint_delbar(m, omega, w)));
        return Outcome{diff(Q(m, omega, w), rhs)};
      });
  add("q.on_omega_balanced", "omega balanced: Q(omega) = P(omega)", [&](auto&) {
    if (!balanced) return skip(need_balanced);
    return Outcome{diff(Q(m, omega, w), P(m, omega, w))};
  });
  add("q.kahler_laplacian", "omega Kahler: Q = -Delta''", [&](auto& rng) {
    if (!kahler) return skip("omega is not Kahler");
    double r = 0.0;
    for (const auto& a : samples(n, 1, 1, rng, rs))
      r = std::max(r, diff(Q(m, omega, a), -laplacian_delbar(m, omega, a)));
    return Outcome{r};
  });
  add("q.harmonic", "Q(alpha) = P(alpha) for alpha in ker Delta''", [&](auto&) {
    const Op lap = [&](const Form& u) { return laplacian_delbar(m, omega, u); };
    const auto k = kernel(phi_matrix(n, lap, 1, 1, 1, 1));
    double r = 0.0;
    for (Eigen::Index c = 0; c < k.cols(); ++c) {
      const Form a = from_coefficients(n, 1, 1, k.col(c));
      r = std::max(r, diff(Q(m, omega, a), P(m, omega, a)));
    }
    return Outcome{r};
  });

  std::string desc = "omega: " + describe_metric(omega) + "; gamma: " + describe_metric(gamma);
  (void)vol;
  return run_jobs(std::move(jobs), "operators", m, desc, opt);
}

}  // namespace starsplit
