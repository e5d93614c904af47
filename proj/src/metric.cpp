#include "starsplit/metric.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>

#include "starsplit/errors.hpp"

namespace starsplit {

namespace {

const cplx I(0.0, 1.0);

std::pair<int, int> require_bidegree(const Form& u, const char* what) {
  if (auto b = u.bidegree()) return *b;
  if (u.is_zero()) return {-1, -1};
  throw InputError(std::string(what) + " needs a form of a single bidegree");
}

}  // namespace

struct HermitianMetric::Impl {
  Eigen::MatrixXcd h;
  Eigen::MatrixXcd x;
  CoframeSubstitution to_e;
  CoframeSubstitution from_e;
  std::vector<Form> powers;

  Impl(const Eigen::MatrixXcd& h_, const Eigen::MatrixXcd& x_)
      : h(h_), x(x_), to_e(x_.inverse()), from_e(x_) {}
};

HermitianMetric::HermitianMetric(const Eigen::MatrixXcd& h) {
  const int n = int(h.rows());
  if (h.rows() != h.cols() || n < 1 || n > kMaxDim) throw InputError("metric matrix must be square of size 1..7");
  if (!h.allFinite()) throw InputError("metric matrix has non-finite entries");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw InputError("metric matrix is not Hermitian");
  const Eigen::MatrixXcd hs = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hs, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 1e-12 * scale) throw InputError("metric matrix is not positive definite");
  Eigen::LLT<Eigen::MatrixXcd> llt(hs);
  if (llt.info() != Eigen::Success) throw InputError("metric matrix is not positive definite");
  // hs = L L^H and omega = i sum (X^T conj X)_jk phi_j phibar_k force X = L^T.
  const Eigen::MatrixXcd x = llt.matrixL().toDenseMatrix().transpose();
  auto impl = std::make_shared<Impl>(hs, x);
  Form w(n);
  {
    FormAccumulator acc(n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) acc.add(Monomial{1u << j, 1u << k}, I * hs(j, k));
    w = acc.build();
  }
  impl->powers.push_back(Form::scalar(n, 1.0));
  for (int p = 1; p <= n; ++p) impl->powers.push_back(wedge(impl->powers.back(), w) / double(p));
  impl_ = std::move(impl);
}

HermitianMetric HermitianMetric::standard(int n, double scale) {
  if (n < 1 || n > kMaxDim) throw InputError("dimension must be between 1 and 7");
  return HermitianMetric(Eigen::MatrixXcd::Identity(n, n) * scale);
}

HermitianMetric HermitianMetric::diagonal(const std::vector<double>& coeffs) {
  const int n = int(coeffs.size());
  if (n < 1 || n > kMaxDim) throw InputError("dimension must be between 1 and 7");
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) h(j, j) = coeffs[j];
  return HermitianMetric(h);
}

int HermitianMetric::dim() const { return int(impl_->h.rows()); }
const Eigen::MatrixXcd& HermitianMetric::matrix() const { return impl_->h; }
const Eigen::MatrixXcd& HermitianMetric::coframe() const { return impl_->x; }
Form HermitianMetric::to_orthonormal(const Form& u) const { return impl_->to_e.apply(u); }
Form HermitianMetric::from_orthonormal(const Form& u) const { return impl_->from_e.apply(u); }
const Form& HermitianMetric::omega() const { return impl_->powers[1]; }

const Form& HermitianMetric::omega_power(int p) const {
  if (p < 0 || p > dim()) throw InputError("omega power out of range");
  return impl_->powers[p];
}

Form omega_form(const HermitianMetric& g) { return g.omega(); }
Form omega_power(const HermitianMetric& g, int p) { return g.omega_power(p); }

cplx volume_coefficient(int n) {
  // prod_j (i e_j ^ ebar_j) reordered to e_1..e_n ebar_1..ebar_n.
  const cplx in = std::pow(I, n);
  return ((n * (n - 1) / 2) & 1) ? -in : in;
}

Form standard_star(const Form& u) {
  const int n = u.dim();
  const std::uint32_t full = (1u << n) - 1u;
  const cplx vol = volume_coefficient(n);
  FormAccumulator acc(n);
  for (const auto& t : u.terms()) {
    const Monomial m = key_monomial(n, t.key);
    // Only w = e_J ebar_I pairs with conj(e_I ebar_J); its complement is the image.
    const Monomial w{m.anti, m.hol};
    const Monomial image{full & ~m.anti, full & ~m.hol};
    const double pairing = ((m.p() * m.q()) & 1) ? -1.0 : 1.0;
    const int s = wedge_sign(w, image);
    acc.add(image, t.coeff * pairing * vol * double(s));
  }
  return acc.build();
}

Form standard_lambda(const Form& u) {
  const int n = u.dim();
  FormAccumulator acc(n);
  for (const auto& t : u.terms()) {
    const Monomial m = key_monomial(n, t.key);
    for (std::uint32_t common = m.hol & m.anti; common; common &= common - 1) {
      const std::uint32_t bit = common & (~common + 1);
      const Monomial lower{m.hol & ~bit, m.anti & ~bit};
      // Matrix entry of L from lower to m is i * sign; the adjoint takes its conjugate.
      const cplx l_entry = I * double(wedge_sign(Monomial{bit, bit}, lower));
      acc.add(lower, t.coeff * std::conj(l_entry));
    }
  }
  return acc.build();
}

cplx inner_product(const HermitianMetric& g, const Form& u, const Form& v) {
  const auto bu = require_bidegree(u, "inner product");
  const auto bv = require_bidegree(v, "inner product");
  if (bu.first >= 0 && bv.first >= 0 && bu != bv) throw InputError("inner product of forms of different bidegree");
  const Form eu = g.to_orthonormal(u);
  const Form ev = g.to_orthonormal(v);
  cplx s = 0.0;
  for (const auto& t : eu.terms()) s += t.coeff * std::conj(ev.coeff(key_monomial(u.dim(), t.key)));
  return s;
}

double norm_squared(const HermitianMetric& g, const Form& u) {
  double s = 0.0;
  for (const auto& [p, q] : u.bidegrees()) s += inner_product(g, bidegree_component(u, p, q), bidegree_component(u, p, q)).real();
  return s;
}

Form hodge_star(const HermitianMetric& g, const Form& u) {
  require_bidegree(u, "Hodge star");
  return g.from_orthonormal(standard_star(g.to_orthonormal(u)));
}

Form lefschetz_L(const HermitianMetric& g, const Form& u) { return wedge(g.omega(), u); }

Form lefschetz_lambda(const HermitianMetric& g, const Form& u) {
  return g.from_orthonormal(standard_lambda(g.to_orthonormal(u)));
}

Form divide_by_power(const HermitianMetric& g, int k, const Form& y, double tol) {
  const int n = g.dim();
  if (k < 0 || k > n - 1) throw InputError("division power out of range");
  for (const auto& b : y.bidegrees())
    if (b != std::pair<int, int>{k + 1, k + 1}) throw InputError("division target must be a (k+1,k+1)-form");
  const auto source = bidegree_basis(n, 1, 1);
  const auto target = bidegree_basis(n, k + 1, k + 1);
  Eigen::MatrixXcd m(target.size(), source.size());
  for (std::size_t c = 0; c < source.size(); ++c)
    m.col(c) = coefficient_vector(wedge(g.omega_power(k), Form::monomial(n, source[c])), k + 1, k + 1);
  const Eigen::VectorXcd b = coefficient_vector(y, k + 1, k + 1);
  const Eigen::VectorXcd x = m.completeOrthogonalDecomposition().solve(b);
  const double residual = (m * x - b).cwiseAbs().maxCoeff();
  if (residual > tol * (1.0 + b.cwiseAbs().maxCoeff()))
    throw InputError("form is not in the range of omega_k ^ (1,1)-forms");
  return from_coefficients(n, 1, 1, x);
}

std::vector<LefschetzPiece> lefschetz_decompose(const HermitianMetric& g, const Form& u) {
  const int n = g.dim();
  auto bd = require_bidegree(u, "Lefschetz decomposition");
  if (bd.first < 0) return {{0, Form(n)}};
  const auto [p, q] = bd;
  if (p + q > n) throw InputError("Lefschetz decomposition needs degree at most n");
  if (p == 0 || q == 0) return {{0, u}};
  // u = u0 + omega ^ v with Lambda u0 = 0, so (Lambda L) v = Lambda u; Lambda L is
  // positive definite below the middle degree.
  const auto basis = bidegree_basis(n, p - 1, q - 1);
  Eigen::MatrixXcd m(basis.size(), basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c)
    m.col(c) = coefficient_vector(lefschetz_lambda(g, lefschetz_L(g, Form::monomial(n, basis[c]))), p - 1, q - 1);
  const Eigen::VectorXcd rhs = coefficient_vector(lefschetz_lambda(g, u), p - 1, q - 1);
  const Form v = from_coefficients(n, p - 1, q - 1, m.partialPivLu().solve(rhs));
  std::vector<LefschetzPiece> out{{0, u - lefschetz_L(g, v)}};
  for (const auto& piece : lefschetz_decompose(g, v)) {
    // omega ^ omega_s = (s+1) omega_{s+1}
    out.push_back({piece.r + 1, double(piece.r + 1) * piece.primitive});
  }
  return out;
}

Eigen::MatrixXcd hermitian_coefficients(const Form& u) {
  const int n = u.dim();
  for (const auto& b : u.bidegrees())
    if (b != std::pair<int, int>{1, 1}) throw InputError("expected a (1,1)-form");
  Eigen::MatrixXcd a(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) a(j, k) = u.coeff(Monomial{1u << j, 1u << k}) / I;
  return a;
}

Form form_from_hermitian(const Eigen::MatrixXcd& a) {
  const int n = int(a.rows());
  FormAccumulator acc(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) acc.add(Monomial{1u << j, 1u << k}, I * a(j, k));
  return acc.build();
}

std::vector<double> generalized_eigenvalues(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& h) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale) throw InputError("form is not real");
  const Eigen::MatrixXcd as = 0.5 * (a + a.adjoint());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> es(as, h, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace starsplit
