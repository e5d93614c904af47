// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "starsplit/analysis.hpp"
#include "starsplit/catalog.hpp"
#include "starsplit/errors.hpp"
#include "starsplit/io.hpp"
#include "starsplit/search.hpp"
#include "starsplit/verify.hpp"

using namespace starsplit;

namespace {

constexpr double kTol = 1e-10;

// Collects failed sub-checks of one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++count_;
    if (!ok) failures_.push_back(what);
  }
  void near(double got, double want, const std::string& what, double tol = kTol) {
    std::ostringstream s;
    s << what << ": got " << format_double(got) << ", expected " << format_double(want);
    expect(std::abs(got - want) <= tol * (1.0 + std::abs(want)), s.str());
  }
  bool ok() const { return failures_.empty(); }
  std::string summary() const {
    if (ok()) return std::to_string(count_) + " checks";
    std::string s = std::to_string(failures_.size()) + "/" + std::to_string(count_) + " failed: " + failures_.front();
    return s;
  }

 private:
  int count_ = 0;
  std::vector<std::string> failures_;
};

CatalogEntry ce(cplx t) { return catalog::get("calabi_eckmann", {{"t", t}}); }

const std::vector<cplx> kTValues{cplx(0.0, 0.25), cplx(0.0, -0.25), 0.1, cplx(0.1, 0.1)};

// Three sigma-vectors: sigma12, sigma11bar, sigma12bar, sigma21bar, sigma22bar.
const std::vector<std::vector<cplx>> kSigmas{
    {-1.0, 0.0, 0.0, 0.1, 0.0},
    {cplx(-1.0, 0.2), cplx(0.1, 0.05), 0.3, 0.0, 0.2},
    {cplx(-0.8, 0.1), 0.5, cplx(0.0, -0.4), cplx(0.2, 0.1), 0.5},
};

CatalogEntry deformation(const std::vector<cplx>& s) {
  return catalog::get("iwasawa_def", {{"sigma12", s[0]}, {"sigma11bar", s[1]}, {"sigma12bar", s[2]},
                                      {"sigma21bar", s[3]}, {"sigma22bar", s[4]}});
}

std::vector<CatalogEntry> six_entries() {
  return {catalog::get("torus_3"), catalog::get("iwasawa3"), catalog::get("nakamura"),
          catalog::get("iwasawa_def"), catalog::get("iwasawa5"), ce(cplx(0.0, 0.25))};
}

void eigen_near(Check& c, const std::vector<double>& got, const std::vector<double>& want, const std::string& what) {
  c.expect(got.size() == want.size(), what + ": eigenvalue count");
  for (std::size_t k = 0; k < std::min(got.size(), want.size()); ++k)
    c.near(got[k], want[k], what + " eigenvalue " + std::to_string(k));
}

Check criterion1() {
  Check c;
  c.near(classify(catalog::get("iwasawa3").manifold, catalog::get("iwasawa3").metric).f, 1.0, "iwasawa3 f");
  c.near(classify(catalog::get("nakamura").manifold, catalog::get("nakamura").metric).f, 2.0, "nakamura f");
  c.near(classify(catalog::get("iwasawa5").manifold, catalog::get("iwasawa5").metric).f, 3.0, "iwasawa5 f");
  for (const cplx t : kTValues) {
    const auto e = ce(t);
    c.near(classify(e.manifold, e.metric).f, 8.0 * t.imag(), "calabi_eckmann f at t=" + format_complex(t));
  }
  for (const auto& s : kSigmas) {
    const auto e = deformation(s);
    c.near(classify(e.manifold, e.metric).f, catalog::iwasawa_deformation_a(s[0], s[1], s[2], s[3], s[4]),
           "iwasawa_def f = A");
  }
  for (int n : {3, 4, 5}) {
    const auto e = catalog::get("torus_" + std::to_string(n));
    c.near(classify(e.manifold, e.metric).f, 0.0, "torus f");
  }
  return c;
}

Check criterion2() {
  Check c;
  for (const auto& name : {"iwasawa3", "nakamura", "iwasawa5"}) {
    const auto e = catalog::get(name);
    const auto r = classify(e.manifold, e.metric);
    c.expect(r.balanced.value, std::string(name) + " balanced");
    c.expect(r.closed_star_split.value, std::string(name) + " closed star split");
    c.expect(!r.kahler.value, std::string(name) + " not Kahler");
    c.expect(r.implications_consistent, std::string(name) + " implications");
  }
  for (const cplx t : kTValues) {
    const auto e = ce(t);
    const auto r = classify(e.manifold, e.metric);
    const std::string at = " at t=" + format_complex(t);
    c.expect(r.pluriclosed_star_split.value, "calabi_eckmann pss" + at);
    c.expect(r.skt.value == (t.imag() == 0.0), "calabi_eckmann SKT exactly at real t" + at);
    if (t.imag() == 0.0) c.expect(r.rho.max_abs() < kTol, "calabi_eckmann rho = 0" + at);
  }
  for (const auto& s : kSigmas) {
    const double a = catalog::iwasawa_deformation_a(s[0], s[1], s[2], s[3], s[4]);
    if (a == 0.0 || std::abs(s[1] + s[4]) == 0.0) continue;
    const auto e = deformation(s);
    const auto r = classify(e.manifold, e.metric);
    c.expect(r.pluriclosed_star_split.value, "iwasawa_def pss");
    c.expect(!r.closed_star_split.value, "iwasawa_def not closed star split");
  }
  return c;
}

Check criterion3() {
  Check c;
  auto eig = [](const CatalogEntry& e) { return classify(e.manifold, e.metric).eigenvalues; };
  eigen_near(c, eig(catalog::get("nakamura")), {1.0, 0.0, 0.0}, "nakamura");
  eigen_near(c, eig(catalog::get("iwasawa5")), {0.75, 0.75, -0.25, -0.25, -0.25}, "iwasawa5");
  for (const cplx t : kTValues) {
    const double s = 4.0 * t.imag();
    std::vector<double> want{s, s, -s};
    std::sort(want.rbegin(), want.rend());
    eigen_near(c, eig(ce(t)), want, "calabi_eckmann t=" + format_complex(t));
  }
  const auto iw = catalog::get("iwasawa3");
  const auto r = classify(iw.manifold, iw.metric);
  eigen_near(c, r.eigenvalues, {0.5, 0.5, -0.5}, "iwasawa3");
  const Json j = report_to_json(r, &iw.expectations);
  c.expect(j["expected"].contains("eigenvalue_discrepancy") && j["expected"]["eigenvalue_discrepancy"] == true,
           "iwasawa3 report flags the published eigenvalue discrepancy");
  return c;
}

Check criterion4() {
  Check c;
  const double pi2 = std::numbers::pi * std::numbers::pi, e = std::exp(1.0);
  // The conformal factor at Re z1 = 0 equals 1 with Laplacian -pi^2; at Re z1 = 1/4 it is e with Laplacian pi^2 e.
  c.near(conformal_f(1.0, 1.0, -pi2), 1.0 + 2.0 * pi2, "conformal f at Re z1 = 0");
  c.near(conformal_f(1.0, e, pi2 * e), (1.0 - 2.0 * pi2) / e, "conformal f at Re z1 = 1/4");
  for (const auto& name : {"iwasawa3", "nakamura", "iwasawa5"}) {
    const auto entry = catalog::get(name);
    const double f = classify(entry.manifold, entry.metric).f;
    for (double lambda : {2.0, 10.0}) {
      const HermitianMetric scaled(lambda * entry.metric.matrix());
      const double fl = classify(entry.manifold, scaled).f;
      c.near(fl, f / lambda, std::string(name) + " f of the rescaled metric");
      c.near(rescale_f(f, lambda), fl, std::string(name) + " rescale_f");
    }
  }
  return c;
}

void suite_passes(Check& c, const IdentityReport& r, const std::string& what) {
  std::string first;
  for (const auto& e : r.entries)
    if (!e.skipped() && !e.pass && first.empty()) first = e.id + " residual " + format_double(e.residual);
  c.expect(r.all_passed(), what + (first.empty() ? "" : ": " + first));
  c.expect(r.max_residual() < kTol, what + ": max residual " + format_double(r.max_residual()));
}

Check criterion5() {
  Check c;
  for (const auto& e : six_entries()) {
    for (const auto& [label, g] : {std::pair{"standard", e.metric}, std::pair{"random", random_metric(e.manifold.dim(), 17)}}) {
      const auto r = verify_commutation_suite(e.manifold, g);
      suite_passes(c, r, e.manifold.name() + " / " + label);
      c.expect(r.skipped() == 0, e.manifold.name() + ": no commutation identity skipped");
    }
  }
  return c;
}

Check criterion6() {
  Check c;
  // Every identity that must have been evaluated (not skipped) on at least one entry.
  std::vector<std::string> required{"p.trace_formula", "p.division_of_gamma_omega", "p.double_trace", "p.wedge_omega_n1",
                                    "star.gamma_omega_n3", "star.omega33_omega_n4", "p.division_of_omega33",
                                    "f.p_trace_formula", "rho.p_formula", "integral.p_link", "integral.r_vanishes",
                                    "integral.balanced_vanishings", "integral.q_link", "q.on_omega_balanced",
                                    "q.kahler_laplacian", "q.harmonic"};
  std::vector<bool> seen(required.size(), false);
  VerifyOptions opt;
  opt.integral_samples = 24;
  auto run = [&](const CatalogEntry& e, const HermitianMetric& omega, const HermitianMetric& gamma, const std::string& what) {
    const auto r = verify_operator_identities(e.manifold, omega, gamma, opt);
    suite_passes(c, r, what);
    for (std::size_t k = 0; k < required.size(); ++k)
      for (const auto& entry : r.entries)
        if (entry.id == required[k] && !entry.skipped() && entry.pass) seen[k] = true;
  };
  const auto iw = catalog::get("iwasawa3");
  run(iw, iw.metric, HermitianMetric::diagonal({1.0, 2.0, 3.0}), "iwasawa3, gamma = diag(1,2,3)");
  const auto i5 = catalog::get("iwasawa5");
  run(i5, i5.metric, random_metric(5, 23), "iwasawa5, random gamma");
  for (const auto& e : six_entries()) run(e, e.metric, random_metric(e.manifold.dim(), 29), e.manifold.name());
  const auto t4 = catalog::get("torus_4");
  run(t4, random_metric(4, 31), random_metric(4, 37), "torus_4, random metrics");
  for (std::size_t k = 0; k < required.size(); ++k) c.expect(seen[k], required[k] + " evaluated and passed");
  return c;
}

Check criterion7() {
  Check c;
  // Balanced and pss forces f >= 0; gather every hit among catalog entries and sampled metrics.
  std::vector<CatalogEntry> entries = six_entries();
  for (const cplx t : kTValues) entries.push_back(ce(t));
  for (const auto& s : kSigmas) entries.push_back(deformation(s));
  int hits = 0;
  for (const auto& e : entries) {
    for (std::uint64_t seed : {0, 1, 2}) {
      const auto g = seed == 0 ? e.metric : random_metric(e.manifold.dim(), seed);
      const auto r = classify(e.manifold, g);
      if (r.balanced.value && r.pluriclosed_star_split.value) {
        ++hits;
        c.expect(r.f >= -kTol, e.manifold.name() + ": balanced + pss but f < 0");
      }
    }
  }
  c.expect(hits >= 3, "at least three balanced pss hits");
  // Calabi-Eckmann with Im t < 0: pss, not balanced, f < 0.
  for (const cplx t : {cplx(0.0, -0.25), cplx(0.1, -0.3)}) {
    const auto e = ce(t);
    const auto r = classify(e.manifold, e.metric);
    c.expect(r.pluriclosed_star_split.value && !r.balanced.value && r.f < 0.0,
             "calabi_eckmann t=" + format_complex(t) + " is pss, non-balanced with f < 0");
  }
  // Balanced: integral of f omega_n = ||del omega||^2.
  for (const auto& name : {"iwasawa3", "nakamura", "iwasawa5"}) {
    const auto e = catalog::get(name);
    const auto r = classify(e.manifold, e.metric);
    c.near(r.integral_f, r.del_omega_norm2, std::string(name) + " integral of f = ||del omega||^2");
    c.expect(r.del_omega_norm2 > 0.1, std::string(name) + " ||del omega|| nonzero");
  }
  // Pair integrals: omega balanced gives <<del gamma, del omega>>; gamma SKT gives zero.
  const auto iw = catalog::get("iwasawa3");
  for (const auto& gamma : {HermitianMetric::diagonal({1, 2, 3}), random_metric(3, 41)}) {
    const auto pr = pair_analysis(iw.manifold, iw.metric, gamma);
    const cplx rhs = l2_pairing(iw.manifold, iw.metric, iw.manifold.del(gamma.omega()), iw.manifold.del(iw.metric.omega()));
    c.near(pr.integral_f_gamma, rhs.real(), "pair integral with balanced omega");
    c.expect(std::abs(rhs.imag()) < kTol, "pair integral is real");
  }
  const auto skt = ce(0.3);
  for (const auto& omega : {HermitianMetric::diagonal({1.0, 2.0, 0.5}), random_metric(3, 43)}) {
    c.near(pair_analysis(skt.manifold, omega, skt.metric).integral_f_gamma, 0.0, "pair integral with SKT gamma");
  }
  // Pullback identities for the Iwasawa isometries and their compositions.
  const auto& m = iw.manifold;
  const auto& g = iw.metric;
  const auto base = pair_analysis(m, g, g);
  std::vector<PullbackMap> generated = iw.isometries;
  generated.push_back(catalog::iwasawa_rotation(std::polar(1.0, 0.7), std::polar(1.0, -1.9)));
  c.expect(generated.size() >= 4, "at least four generating maps");
  for (const auto& phi : generated) {
    const auto t = triple_analysis(m, phi, g, g);
    c.expect(t.pair.pluriclosed.value, "triple pss for an isometry");
    c.expect((t.pair.rho_pair - pullback(m, phi, base.rho_pair)).max_abs() < kTol, "rho of the triple is the pullback");
  }
  for (const auto& phi : generated)
    for (const auto& psi : generated) {
      const auto comp = triple_analysis(m, phi.compose(psi), g, g);
      const auto tphi = triple_analysis(m, phi, g, g);
      c.expect(comp.pair.pluriclosed.value, "composition stays pss");
      c.expect((comp.pair.rho_pair - pullback(m, psi, tphi.pair.rho_pair)).max_abs() < kTol, "composition law for rho");
      c.expect(structure_compatibility(m, phi.compose(psi)) < kTol, "compositions preserve the structure");
    }
  return c;
}

Check criterion8() {
  Check c;
  const auto iw = catalog::get("iwasawa3");
  const auto a = search_pss(iw.manifold, MetricFamily::diagonal(3), 2000, 5);
  const auto b = search_pss(iw.manifold, MetricFamily::diagonal(3), 2000, 5);
  c.expect(a.best_defect < 1e-8, "iwasawa diagonal search defect " + format_double(a.best_defect));
  c.expect(a.evaluations <= 2000, "budget respected");
  c.expect(search_result_to_json(a).dump() == search_result_to_json(b).dump(), "deterministic under a fixed seed");
  // A family where the start point is not already optimal.
  const auto dm = deformation(kSigmas[2]);
  SearchOptions opt;
  opt.budget = 800;
  opt.seed = 3;
  opt.target = SearchTarget::balanced;
  const auto x = search_metric(dm.manifold, MetricFamily::full_hermitian(3), opt, random_metric(3, 5));
  const auto y = search_metric(dm.manifold, MetricFamily::full_hermitian(3), opt, random_metric(3, 5));
  c.expect(search_result_to_json(x).dump() == search_result_to_json(y).dump(), "full-hermitian search deterministic");

  const auto base = catalog::get("calabi_eckmann");
  std::vector<cplx> values;
  for (int k = -8; k <= 8; ++k) values.push_back(cplx(0.05 * (k % 3), 0.1 * k));
  const auto table = scan(base.manifold, base.metric, "t", values);
  double err = 0.0;
  for (const auto& row : table.rows) err = std::max(err, std::abs(row.report.f - 8.0 * row.param.imag()));
  c.expect(table.rows.size() == values.size(), "scan covers every value");
  c.expect(err < kTol, "scan max error " + format_double(err));
  return c;
}

int exit_code_of(const std::string& args) {
  const std::string cmd = std::string(STARSPLIT_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Check criterion9() {
  Check c;
  const std::string data = STARSPLIT_TEST_DATA;
  c.expect(exit_code_of("classify --manifold " + data + "/corrupted.json") == 2, "corrupted structure exits with 2");
  c.expect(exit_code_of("classify --manifold iwasawa3 --metric " + data + "/indefinite_metric.json") == 2,
           "non-PD metric file exits with 2");
  c.expect(exit_code_of("classify --manifold iwasawa3 --metric '{\"type\":\"diagonal\",\"coeffs\":[1,0,2]}'") == 2,
           "degenerate inline metric exits with 2");
  c.expect(exit_code_of("classify --manifold calabi_eckmann --param t=1.2") == 2, "|t| >= 1 exits with 2");
  c.expect(exit_code_of("classify --manifold calabi_eckmann --param t=0.25i") == 0, "valid t exits with 0");
  // The same guards in the library.
  bool corrupted_rejected = false;
  try {
    manifold_from_json(parse_json(read_text_file(data + "/corrupted.json")));
  } catch (const InputError& e) {
    corrupted_rejected = std::string(e.what()).find("d^2") != std::string::npos;
  }
  c.expect(corrupted_rejected, "library rejects d^2 != 0");
  for (const cplx t : {cplx(1.0, 0.0), cplx(0.6, 0.8), cplx(0.0, -1.5)}) {
    bool guarded = false;
    try {
      ce(t);
    } catch (const InputError&) {
      guarded = true;
    }
    c.expect(guarded, "calabi_eckmann guard at t=" + format_complex(t));
  }
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"constants: f on Iwasawa, Nakamura, I5, Calabi-Eckmann, deformation, torus", criterion1},
      {"classification matrix", criterion2},
      {"eigenvalue reports", criterion3},
      {"conformal example and rescaling law", criterion4},
      {"commutation suite on six entries, standard and random metrics", criterion5},
      {"operator suites", criterion6},
      {"theorem-level property checks", criterion7},
      {"search and scan", criterion8},
      {"robustness and input rejection", criterion9},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Check result;
    try {
      result = criteria[k].second();
    } catch (const std::exception& e) {
      result.expect(false, std::string("exception: ") + e.what());
    }
    if (!result.ok()) ++failed;
    std::printf("%s criterion %zu: %s (%s)\n", result.ok() ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                result.summary().c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
