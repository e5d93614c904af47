#include "starsplit/catalog.hpp"

#include <cmath>
#include <algorithm>
#include <cctype>
#include <functional>

#include "starsplit/errors.hpp"

namespace starsplit::catalog {

namespace {

StructureTerm term(int i, int j, const std::string& coeff) { return {i - 1, j - 1, Expr::parse(coeff)}; }

std::vector<GeneratorStructure> empty_structure(int n) { return std::vector<GeneratorStructure>(n); }

cplx value(const InvariantComplexManifold& m, const std::string& name) { return m.bindings().at(name); }

void check_known(const std::vector<ParameterSpec>& specs, const Bindings& params, const std::string& name) {
  for (const auto& [k, v] : params) {
    bool known = false;
    for (const auto& s : specs) known |= s.name == k;
    if (!known) throw InputError("unknown parameter '" + k + "' for catalog entry '" + name + "'");
  }
}

const std::vector<double> kPublishedIwasawa{1.0, 1.0, -1.0};

CatalogEntry torus(int n) {
  if (n < 1 || n > kMaxDim) throw InputError("torus dimension must be between 1 and 7");
  const std::string name = "torus_" + std::to_string(n);
  InvariantComplexManifold m(name, n, {}, empty_structure(n));
  CatalogExpectations e;
  e.f = 0.0;
  for (const char* flag : {"kahler", "balanced", "gauduchon", "skt", "astheno_kahler", "n2_gauduchon",
                           "pluriclosed_star_split", "closed_star_split"})
    e.flags.emplace_back(flag, true);
  e.rho_zero = true;
  e.eigenvalues = std::vector<double>(n, 0.0);
  return {name, "complex torus with zero structure constants", m, HermitianMetric::standard(n), e, {}};
}

CatalogEntry iwasawa3() {
  auto s = empty_structure(3);
  s[2].holomorphic = {term(1, 2, "-1")};
  InvariantComplexManifold m("iwasawa3", 3, {}, s);
  CatalogExpectations e;
  e.f = 1.0;
  e.flags = {{"kahler", false}, {"balanced", true}, {"pluriclosed_star_split", true}, {"closed_star_split", true}};
  e.eigenvalues = std::vector<double>{0.5, 0.5, -0.5};
  e.published_eigenvalues = kPublishedIwasawa;
  e.notes.push_back(
      "the eigenvalues printed for this example are {1, 1, -1}; the displayed rho = (1/2)(i a^abar + i b^bbar - i "
      "c^cbar) gives {1/2, 1/2, -1/2} under the convention that reproduces the other examples");
  std::vector<PullbackMap> iso;
  for (double a : {0.3, 1.1, 2.5})
    iso.push_back(iwasawa_rotation(std::polar(1.0, a), std::polar(1.0, 0.7 * a + 0.4)));
  iso.push_back(iwasawa_rotation(cplx(-1.0, 0.0), cplx(0.0, 1.0)));
  return {"iwasawa3", "Iwasawa manifold: del phi3 = -phi1 ^ phi2", m, HermitianMetric::standard(3), e, iso};
}

CatalogEntry nakamura() {
  auto s = empty_structure(3);
  s[1].holomorphic = {term(1, 2, "1")};
  s[2].holomorphic = {term(1, 3, "-1")};
  InvariantComplexManifold m("nakamura", 3, {}, s);
  CatalogExpectations e;
  e.f = 2.0;
  e.flags = {{"kahler", false}, {"balanced", true}, {"pluriclosed_star_split", true}, {"closed_star_split", true}};
  e.eigenvalues = std::vector<double>{1.0, 0.0, 0.0};
  return {"nakamura", "Nakamura manifold: del phi2 = phi1 ^ phi2, del phi3 = -phi1 ^ phi3", m,
          HermitianMetric::standard(3), e, {}};
}

CatalogEntry iwasawa_def(const Bindings& params) {
  std::vector<ParameterSpec> specs{{"t", 0.0},          {"sigma12", -1.0},    {"sigma11bar", 0.0},
                                   {"sigma12bar", 0.0}, {"sigma21bar", 0.0}, {"sigma22bar", 0.0}};
  check_known(specs, params, "iwasawa_def");
  auto s = empty_structure(3);
  s[2].holomorphic = {term(1, 2, "sigma12")};
  s[2].mixed = {term(1, 1, "sigma11bar"), term(1, 2, "sigma12bar"), term(2, 1, "sigma21bar"),
                term(2, 2, "sigma22bar")};
  InvariantComplexManifold m("iwasawa_def", 3, specs, s, params);
  const cplx s11 = value(m, "sigma11bar"), s22 = value(m, "sigma22bar");
  const double a = iwasawa_deformation_a(value(m, "sigma12"), s11, value(m, "sigma12bar"), value(m, "sigma21bar"), s22);
  CatalogExpectations e;
  e.f = a;
  const bool closed = std::abs(a * (s11 + s22)) < 1e-12;
  e.flags = {{"gauduchon", true}, {"pluriclosed_star_split", true}, {"closed_star_split", closed}};
  e.eigenvalues = std::vector<double>{a / 2, a / 2, -a / 2};
  e.published_eigenvalues = kPublishedIwasawa;
  e.notes.push_back("the eigenvalues printed for this example are {1, 1, -1}; the closed form of *rho gives "
                    "{A/2, A/2, -A/2} with A the value of f");
  e.notes.push_back("the parameter t only labels the deformation; the sigma values are supplied directly");
  return {"iwasawa_def", "small deformation of the Iwasawa manifold in classes (ii)/(iii)", m,
          HermitianMetric::standard(3), e, {}};
}

CatalogEntry iwasawa5() {
  auto s = empty_structure(5);
  s[2].holomorphic = {term(1, 2, "1")};
  s[3].holomorphic = {term(1, 3, "1")};
  s[4].holomorphic = {term(2, 3, "1")};
  InvariantComplexManifold m("iwasawa5", 5, {}, s);
  CatalogExpectations e;
  e.f = 3.0;
  e.flags = {{"kahler", false}, {"balanced", true}, {"pluriclosed_star_split", true}, {"closed_star_split", true}};
  e.eigenvalues = std::vector<double>{0.75, 0.75, -0.25, -0.25, -0.25};
  return {"iwasawa5", "5-dimensional Iwasawa manifold", m, HermitianMetric::standard(5), e, {}};
}

CatalogEntry calabi_eckmann(const Bindings& params) {
  std::vector<ParameterSpec> specs{{"t", 0.0}};
  check_known(specs, params, "calabi_eckmann");
  cplx t = 0.0;
  if (auto it = params.find("t"); it != params.end()) t = it->second;
  if (!(std::abs(t) < 1.0)) throw InputError("calabi_eckmann needs |t| < 1 (structure coefficients are singular at |t| = 1)");
  auto s = empty_structure(3);
  s[0].holomorphic = {term(1, 3, "i*(conj(t)+1)/(1-abs2(t))")};
  s[0].mixed = {term(1, 3, "i*(t+1)/(1-abs2(t))")};
  s[1].holomorphic = {term(2, 3, "(1-conj(t))/(1-abs2(t))")};
  s[1].mixed = {term(2, 3, "(t-1)/(1-abs2(t))")};
  s[2].mixed = {term(1, 1, "i*(t-1)"), term(2, 2, "t+1")};
  InvariantComplexManifold m("calabi_eckmann", 3, specs, s, params);
  const double im = t.imag();
  const bool real_t = std::abs(im) < 1e-15;
  CatalogExpectations e;
  e.f = 8.0 * im;
  e.flags = {{"gauduchon", true}, {"pluriclosed_star_split", true}, {"skt", real_t}, {"closed_star_split", real_t}};
  e.rho_zero = real_t;
  e.eigenvalues = std::vector<double>{4.0 * im, 4.0 * im, -4.0 * im};
  std::sort(e.eigenvalues->begin(), e.eigenvalues->end(), std::greater<>());
  return {"calabi_eckmann", "deformation of the Calabi-Eckmann structure on S^3 x S^3", m,
          HermitianMetric::standard(3, 0.5), e, {}};
}

}  // namespace

std::vector<std::string> list() {
  return {"torus_n", "iwasawa3", "nakamura", "iwasawa_def", "iwasawa5", "calabi_eckmann"};
}

CatalogEntry get(const std::string& name, const Bindings& params) {
  CatalogEntry entry = [&]() -> CatalogEntry {
    if (name == "iwasawa3" || name == "nakamura" || name == "iwasawa5") {
      if (!params.empty()) throw InputError("catalog entry '" + name + "' takes no parameters");
      if (name == "iwasawa3") return iwasawa3();
      if (name == "nakamura") return nakamura();
      return iwasawa5();
    }
    if (name == "iwasawa_def") return iwasawa_def(params);
    if (name == "calabi_eckmann") return calabi_eckmann(params);
    if (name == "torus_n") {
      int n = 3;
      for (const auto& [k, v] : params) {
        if (k != "n") throw InputError("unknown parameter '" + k + "' for catalog entry 'torus_n'");
        if (v.imag() != 0.0 || v.real() != std::round(v.real())) throw InputError("torus dimension must be an integer");
        n = int(v.real());
      }
      return torus(n);
    }
    if (name.rfind("torus_", 0) == 0 && name.size() == 7 && std::isdigit(static_cast<unsigned char>(name[6]))) {
      if (!params.empty()) throw InputError("catalog entry '" + name + "' takes no parameters");
      return torus(name[6] - '0');
    }
    throw InputError("unknown catalog entry '" + name + "'");
  }();
  validate(entry.manifold);
  return entry;
}

PullbackMap iwasawa_rotation(cplx u, cplx v) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 3);
  a(0, 0) = u;
  a(1, 1) = v;
  a(2, 2) = u * v;
  return PullbackMap(a);
}

double iwasawa_deformation_a(cplx s12, cplx s11b, cplx s12b, cplx s21b, cplx s22b) {
  return std::norm(s12) + std::norm(s21b) + std::norm(s12b) - 2.0 * (s11b * std::conj(s22b)).real();
}

}  // namespace starsplit::catalog
