#include "starsplit/manifold.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "starsplit/errors.hpp"

namespace starsplit {

struct InvariantComplexManifold::Impl {
  std::string name;
  int n;
  std::vector<ParameterSpec> params;
  std::vector<GeneratorStructure> structure;
  Bindings values;
  std::vector<Form> d_phi;
  std::vector<Form> d_table, del_table, delbar_table;  // indexed by monomial key
};

void InvariantComplexManifold::build_tables(Impl& m) {
  const int n = m.n;
  for (int k = 0; k < n; ++k) {
    FormAccumulator acc(n);
    for (const auto& t : m.structure[k].holomorphic) {
      if (t.i == t.j) throw InputError("(2,0) structure term with repeated index");
      acc.add(Form::monomial(n, std::vector<int>{t.i, t.j}, {}, t.coeff.evaluate(m.values)));
    }
    for (const auto& t : m.structure[k].mixed)
      acc.add(Form::monomial(n, std::vector<int>{t.i}, std::vector<int>{t.j}, t.coeff.evaluate(m.values)));
    m.d_phi.push_back(acc.build());
  }
  const std::size_t size = std::size_t(1) << (2 * n);
  m.d_table.assign(size, Form(n));
  std::vector<std::uint32_t> keys(size);
  for (std::uint32_t k = 0; k < size; ++k) keys[k] = k;
  std::stable_sort(keys.begin(), keys.end(),
                   [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
  // d(g ^ rest) = dg ^ rest - g ^ d(rest), with g the leading generator.
  for (auto key : keys) {
    if (key == 0) continue;
    const Monomial mono = key_monomial(n, key);
    Monomial g, rest;
    Form dg(n);
    if (mono.hol) {
      const std::uint32_t bit = mono.hol & (~mono.hol + 1);
      g = {bit, 0};
      rest = {mono.hol & ~bit, mono.anti};
      dg = m.d_phi[std::countr_zero(bit)];
    } else {
      const std::uint32_t bit = mono.anti & (~mono.anti + 1);
      g = {0, bit};
      rest = {0, mono.anti & ~bit};
      dg = conjugate(m.d_phi[std::countr_zero(bit)]);
    }
    const Form rest_form = Form::monomial(n, rest);
    m.d_table[key] = wedge(dg, rest_form) - wedge(Form::monomial(n, g), m.d_table[monomial_key(n, rest)]);
  }
  m.del_table.assign(size, Form(n));
  m.delbar_table.assign(size, Form(n));
  for (std::uint32_t key = 0; key < size; ++key) {
    const Monomial mono = key_monomial(n, key);
    m.del_table[key] = bidegree_component(m.d_table[key], mono.p() + 1, mono.q());
    m.delbar_table[key] = bidegree_component(m.d_table[key], mono.p(), mono.q() + 1);
  }
}

namespace {

Form apply_table(const std::vector<Form>& table, const Form& u, int n) {
  if (u.dim() != n) throw InputError("dimension mismatch between form and manifold");
  FormAccumulator acc(n);
  for (const auto& t : u.terms()) acc.add(table[t.key], t.coeff);
  return acc.build();
}

}  // namespace

InvariantComplexManifold::InvariantComplexManifold(std::string name, int n, std::vector<ParameterSpec> params,
                                                   std::vector<GeneratorStructure> structure,
                                                   const Bindings& values) {
  if (n < 1 || n > kMaxDim) throw InputError("manifold dimension must be between 1 and 7");
  if (int(structure.size()) != n) throw InputError("structure must list one differential per generator");
  for (const auto& gen : structure)
    for (const auto* part : {&gen.holomorphic, &gen.mixed})
      for (const auto& t : *part)
        if (t.i < 0 || t.i >= n || t.j < 0 || t.j >= n) throw InputError("structure index out of range");
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->n = n;
  impl->params = std::move(params);
  impl->structure = std::move(structure);
  std::set<std::string> names;
  for (const auto& p : impl->params) {
    if (p.name == "i") throw InputError("'i' is reserved for the imaginary unit");
    if (!names.insert(p.name).second) throw InputError("duplicate parameter '" + p.name + "'");
    impl->values[p.name] = p.default_value;
  }
  for (const auto& [k, v] : values) {
    if (!names.count(k)) throw InputError("unknown parameter '" + k + "' for manifold '" + impl->name + "'");
    impl->values[k] = v;
  }
  build_tables(*impl);
  impl_ = std::move(impl);
}

InvariantComplexManifold InvariantComplexManifold::bind(const Bindings& values) const {
  Bindings merged = impl_->values;
  for (const auto& [k, v] : values) merged[k] = v;
  for (const auto& [k, v] : values) {
    bool known = false;
    for (const auto& p : impl_->params) known |= p.name == k;
    if (!known) throw InputError("unknown parameter '" + k + "' for manifold '" + impl_->name + "'");
  }
  return InvariantComplexManifold(impl_->name, impl_->n, impl_->params, impl_->structure, merged);
}

const std::string& InvariantComplexManifold::name() const { return impl_->name; }
int InvariantComplexManifold::dim() const { return impl_->n; }
const std::vector<ParameterSpec>& InvariantComplexManifold::parameters() const { return impl_->params; }
const Bindings& InvariantComplexManifold::bindings() const { return impl_->values; }
const std::vector<GeneratorStructure>& InvariantComplexManifold::structure() const { return impl_->structure; }

const Form& InvariantComplexManifold::d_phi(int k) const {
  if (k < 0 || k >= impl_->n) throw InputError("generator index out of range");
  return impl_->d_phi[k];
}

Form InvariantComplexManifold::d(const Form& u) const { return apply_table(impl_->d_table, u, impl_->n); }
Form InvariantComplexManifold::del(const Form& u) const { return apply_table(impl_->del_table, u, impl_->n); }
Form InvariantComplexManifold::delbar(const Form& u) const { return apply_table(impl_->delbar_table, u, impl_->n); }

Form exterior_d(const InvariantComplexManifold& m, const Form& u) { return m.d(u); }
Form del(const InvariantComplexManifold& m, const Form& u) { return m.del(u); }
Form delbar(const InvariantComplexManifold& m, const Form& u) { return m.delbar(u); }

double check_integrability(const InvariantComplexManifold& m) {
  double r = 0.0;
  for (int k = 0; k < m.dim(); ++k) r = std::max(r, m.d(m.d_phi(k)).max_abs());
  return r;
}

double check_stokes(const InvariantComplexManifold& m) {
  const int n = m.dim();
  const std::uint32_t full = (1u << n) - 1u;
  const Monomial top{full, full};
  double r = 0.0;
  for (int j = 0; j < n; ++j) {
    const std::uint32_t bit = 1u << j;
    for (const Monomial b : {Monomial{full & ~bit, full}, Monomial{full, full & ~bit}})
      r = std::max(r, std::abs(m.d(Form::monomial(n, b)).coeff(top)));
  }
  return r;
}

void validate(const InvariantComplexManifold& m, double tol) {
  const double integ = check_integrability(m);
  if (!(integ <= tol))
    throw InputError("structure of '" + m.name() + "' is not integrable: d^2 != 0 (residual " + std::to_string(integ) + ")");
  const double stokes = check_stokes(m);
  if (!(stokes <= tol))
    throw InputError("structure of '" + m.name() + "' is not unimodular: invariant Stokes check fails (residual " +
                     std::to_string(stokes) + ")");
}

cplx integrate(const InvariantComplexManifold& m, const Form& u) {
  const int n = m.dim();
  if (u.dim() != n) throw InputError("dimension mismatch between form and manifold");
  const std::uint32_t full = (1u << n) - 1u;
  return u.coeff(Monomial{full, full}) / volume_coefficient(n);
}

cplx l2_pairing(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& u, const Form& v) {
  return inner_product(g, u, v) * integrate(m, g.omega_power(g.dim()));
}

Form adjoint_del(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& u) {
  return -hodge_star(g, m.delbar(hodge_star(g, u)));
}

Form adjoint_delbar(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& u) {
  return -hodge_star(g, m.del(hodge_star(g, u)));
}

Form laplacian_delbar(const InvariantComplexManifold& m, const HermitianMetric& g, const Form& u) {
  return m.delbar(adjoint_delbar(m, g, u)) + adjoint_delbar(m, g, m.delbar(u));
}

PullbackMap::PullbackMap(const Eigen::MatrixXcd& a) : a_(a) {
  if (a.rows() != a.cols() || a.rows() < 1 || a.rows() > kMaxDim) throw InputError("pullback matrix must be square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if (Eigen::FullPivLU<Eigen::MatrixXcd>(a / scale).rank() < a.rows()) throw InputError("pullback matrix is singular");
  sub_ = std::make_shared<const CoframeSubstitution>(a);
}

PullbackMap PullbackMap::identity(int n) { return PullbackMap(Eigen::MatrixXcd::Identity(n, n)); }

PullbackMap PullbackMap::compose(const PullbackMap& psi) const { return PullbackMap(a_ * psi.a_); }

PullbackMap PullbackMap::inverse() const { return PullbackMap(a_.inverse()); }

Form pullback(const InvariantComplexManifold& m, const PullbackMap& phi, const Form& u) {
  if (phi.dim() != m.dim() || u.dim() != m.dim()) throw InputError("dimension mismatch in pullback");
  return phi.apply(u);
}

double structure_compatibility(const InvariantComplexManifold& m, const PullbackMap& phi) {
  double r = 0.0;
  for (int k = 0; k < m.dim(); ++k) {
    const Form gen = Form::phi(m.dim(), k);
    r = std::max(r, (m.d(phi.apply(gen)) - phi.apply(m.d(gen))).max_abs());
  }
  return r;
}

HermitianMetric pullback_metric(const PullbackMap& phi, const HermitianMetric& g) {
  return HermitianMetric(hermitian_coefficients(phi.apply(g.omega())));
}

}  // namespace starsplit
