#include "starsplit/form.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "starsplit/errors.hpp"

namespace starsplit {

namespace {

int popcount(std::uint32_t x) { return std::popcount(x); }

// Parity of the number of pairs (i in x, j in y) with i > j.
int inversion_parity(std::uint32_t x, std::uint32_t y) {
  int count = 0;
  while (y) {
    const int j = std::countr_zero(y);
    y &= y - 1;
    count += popcount(x >> (j + 1));
  }
  return count & 1;
}

int check_dim(int n) {
  if (n < 1 || n > kMaxDim) throw InputError("dimension must be between 1 and " + std::to_string(kMaxDim));
  return n;
}

void require_same_dim(const Form& a, const Form& b) {
  if (a.dim() != b.dim()) throw InputError("dimension mismatch between forms");
}

// Sign of sorting a list of distinct indices; 0 when an index repeats.
int sort_sign(std::vector<int>& idx, std::uint32_t& mask, int n) {
  mask = 0;
  for (int i : idx) {
    if (i < 0 || i >= n) throw InputError("coframe index out of range");
    if (mask & (1u << i)) return 0;
    mask |= 1u << i;
  }
  int parity = 0;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j)
      if (idx[i] > idx[j]) parity ^= 1;
  return parity ? -1 : 1;
}

}  // namespace

int Monomial::p() const { return popcount(hol); }
int Monomial::q() const { return popcount(anti); }

int wedge_sign(Monomial a, Monomial b) {
  if ((a.hol & b.hol) || (a.anti & b.anti)) return 0;
  int parity = (popcount(a.anti) * popcount(b.hol)) & 1;
  parity ^= inversion_parity(a.hol, b.hol);
  parity ^= inversion_parity(a.anti, b.anti);
  return parity ? -1 : 1;
}

std::vector<Monomial> bidegree_basis(int n, int p, int q) {
  std::vector<Monomial> out;
  if (p < 0 || q < 0 || p > n || q > n) return out;
  std::vector<std::uint32_t> hs, as;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if (popcount(s) == p) hs.push_back(s);
    if (popcount(s) == q) as.push_back(s);
  }
  for (auto a : as)
    for (auto h : hs) out.push_back({h, a});
  return out;
}

Form::Form(int n) : n_(n) { check_dim(n); }

Form Form::scalar(int n, cplx c) { return from_terms(n, {{0u, c}}); }

Form Form::monomial(int n, Monomial m, cplx c) { return from_terms(n, {{monomial_key(n, m), c}}); }

Form Form::monomial(int n, const std::vector<int>& hol, const std::vector<int>& anti, cplx c) {
  check_dim(n);
  std::vector<int> h = hol, a = anti;
  Monomial m;
  const int sh = sort_sign(h, m.hol, n);
  const int sa = sort_sign(a, m.anti, n);
  if (sh == 0 || sa == 0) return Form(n);
  return monomial(n, m, c * double(sh * sa));
}

Form Form::phi(int n, int k) { return monomial(n, std::vector<int>{k}, {}); }
Form Form::phibar(int n, int k) { return monomial(n, {}, std::vector<int>{k}); }

Form Form::from_terms(int n, std::vector<Term> terms, double threshold) {
  FormAccumulator acc(n);
  for (const auto& t : terms) acc.add(t.key, t.coeff);
  return acc.build(threshold);
}

cplx Form::coeff(Monomial m) const {
  const auto key = monomial_key(n_, m);
  auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                             [](const Term& t, std::uint32_t k) { return t.key < k; });
  return (it != terms_.end() && it->key == key) ? it->coeff : cplx(0.0);
}

std::vector<std::pair<int, int>> Form::bidegrees() const {
  std::vector<std::pair<int, int>> out;
  for (const auto& t : terms_) {
    const Monomial m = key_monomial(n_, t.key);
    out.emplace_back(m.p(), m.q());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<std::pair<int, int>> Form::bidegree() const {
  auto b = bidegrees();
  if (b.size() != 1) return std::nullopt;
  return b.front();
}

double Form::max_abs() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coeff));
  return m;
}

double Form::norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::norm(t.coeff);
  return std::sqrt(s);
}

Form Form::pruned(double threshold) const { return from_terms(n_, terms_, threshold); }

Form Form::operator-() const { return cplx(-1.0) * *this; }

Form operator+(const Form& a, const Form& b) {
  require_same_dim(a, b);
  FormAccumulator acc(a.dim());
  acc.add(a);
  acc.add(b);
  return acc.build();
}

Form operator-(const Form& a, const Form& b) {
  require_same_dim(a, b);
  FormAccumulator acc(a.dim());
  acc.add(a);
  acc.add(b, -1.0);
  return acc.build();
}

Form operator*(cplx c, const Form& a) {
  FormAccumulator acc(a.dim());
  acc.add(a, c);
  return acc.build();
}

FormAccumulator::FormAccumulator(int n)
    : n_(check_dim(n)), dense_(std::size_t(1) << (2 * n)), used_(dense_.size(), 0) {}

void FormAccumulator::add(std::uint32_t key, cplx c) {
  if (!used_[key]) {
    used_[key] = 1;
    touched_.push_back(key);
  }
  dense_[key] += c;
}

void FormAccumulator::add(const Form& f, cplx scale) {
  if (f.dim() != n_) throw InputError("dimension mismatch between forms");
  for (const auto& t : f.terms()) add(t.key, scale * t.coeff);
}

Form FormAccumulator::build(double threshold) const {
  std::vector<Term> terms;
  terms.reserve(touched_.size());
  for (auto key : touched_)
    if (std::abs(dense_[key]) > threshold) terms.push_back({key, dense_[key]});
  std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.key < y.key; });
  return Form::from_sorted_unchecked(n_, std::move(terms));
}

Form wedge(const Form& a, const Form& b) {
  require_same_dim(a, b);
  const int n = a.dim();
  FormAccumulator acc(n);
  for (const auto& x : a.terms()) {
    const Monomial mx = key_monomial(n, x.key);
    for (const auto& y : b.terms()) {
      const Monomial my = key_monomial(n, y.key);
      const int s = wedge_sign(mx, my);
      if (s != 0) acc.add(Monomial{mx.hol | my.hol, mx.anti | my.anti}, double(s) * x.coeff * y.coeff);
    }
  }
  return acc.build();
}

Form linear_combine(const std::vector<cplx>& coeffs, const std::vector<Form>& forms) {
  if (coeffs.size() != forms.size()) throw InputError("coefficient and form lists differ in length");
  if (forms.empty()) throw InputError("linear combination of an empty list");
  FormAccumulator acc(forms.front().dim());
  for (std::size_t i = 0; i < forms.size(); ++i) acc.add(forms[i], coeffs[i]);
  return acc.build();
}

Form conjugate(const Form& a) {
  const int n = a.dim();
  FormAccumulator acc(n);
  for (const auto& t : a.terms()) {
    const Monomial m = key_monomial(n, t.key);
    const double s = ((m.p() * m.q()) & 1) ? -1.0 : 1.0;
    acc.add(Monomial{m.anti, m.hol}, s * std::conj(t.coeff));
  }
  return acc.build();
}

Form bidegree_component(const Form& a, int p, int q) {
  const int n = a.dim();
  FormAccumulator acc(n);
  for (const auto& t : a.terms()) {
    const Monomial m = key_monomial(n, t.key);
    if (m.p() == p && m.q() == q) acc.add(t.key, t.coeff);
  }
  return acc.build();
}

Form degree_component(const Form& a, int k) {
  const int n = a.dim();
  FormAccumulator acc(n);
  for (const auto& t : a.terms())
    if (key_monomial(n, t.key).degree() == k) acc.add(t.key, t.coeff);
  return acc.build();
}

bool approx_equal(const Form& a, const Form& b, double tol) {
  require_same_dim(a, b);
  return (a - b).max_abs() <= tol;
}

bool is_real(const Form& a, double tol) { return approx_equal(a, conjugate(a), tol); }

Eigen::VectorXcd coefficient_vector(const Form& a, int p, int q) {
  const auto basis = bidegree_basis(a.dim(), p, q);
  Eigen::VectorXcd v(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) v(i) = a.coeff(basis[i]);
  return v;
}

Form from_coefficients(int n, int p, int q, const Eigen::VectorXcd& v) {
  const auto basis = bidegree_basis(n, p, q);
  if (std::size_t(v.size()) != basis.size()) throw InputError("coefficient vector has the wrong length");
  FormAccumulator acc(n);
  for (std::size_t i = 0; i < basis.size(); ++i) acc.add(basis[i], v(i));
  return acc.build();
}

CoframeSubstitution::CoframeSubstitution(const Eigen::MatrixXcd& a) : n_(int(a.rows())), a_(a) {
  if (a.rows() != a.cols()) throw InputError("coframe map must be square");
  check_dim(n_);
  const std::uint32_t full = 1u << n_;
  subsets_by_size_.assign(n_ + 1, {});
  for (std::uint32_t s = 0; s < full; ++s) subsets_by_size_[popcount(s)].push_back(s);
  minors_.assign(std::size_t(full) * full, cplx(0.0));
  minors_[0] = 1.0;
  // Laplace expansion along the lowest selected row, smallest subsets first.
  for (int k = 1; k <= n_; ++k) {
    for (auto rows : subsets_by_size_[k]) {
      const int r0 = std::countr_zero(rows);
      const std::uint32_t rest = rows & (rows - 1);
      for (auto cols : subsets_by_size_[k]) {
        cplx det = 0.0;
        int pos = 0;
        for (std::uint32_t c = cols; c; c &= c - 1, ++pos) {
          const int col = std::countr_zero(c);
          const cplx sub = minor(rest, cols & ~(1u << col));
          if (sub != 0.0) det += ((pos & 1) ? -1.0 : 1.0) * a_(r0, col) * sub;
        }
        minors_[(rows << n_) | cols] = det;
      }
    }
  }
}

Form CoframeSubstitution::apply(const Form& u) const {
  if (u.dim() != n_) throw InputError("dimension mismatch in coframe substitution");
  FormAccumulator acc(n_);
  for (const auto& t : u.terms()) {
    const Monomial m = key_monomial(n_, t.key);
    for (auto k : subsets_by_size_[m.p()]) {
      const cplx mh = minor(m.hol, k);
      if (mh == 0.0) continue;
      for (auto l : subsets_by_size_[m.q()]) {
        const cplx ma = std::conj(minor(m.anti, l));
        if (ma != 0.0) acc.add(Monomial{k, l}, t.coeff * mh * ma);
      }
    }
  }
  return acc.build();
}

std::string monomial_label(Monomial m) {
  std::string out;
  auto append = [&](std::uint32_t mask, const char* name) {
    for (; mask; mask &= mask - 1) {
      if (!out.empty()) out += '^';
      out += name + std::to_string(std::countr_zero(mask) + 1);
    }
  };
  append(m.hol, "phi");
  append(m.anti, "phibar");
  return out.empty() ? "1" : out;
}

std::string to_string(const Form& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    const cplx c = a.terms()[i].coeff;
    os << (first ? "" : " + ") << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i) "
       << monomial_label(a.monomial_at(i));
    first = false;
  }
  return os.str();
}

}  // namespace starsplit
