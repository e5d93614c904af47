#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace starsplit {

using cplx = std::complex<double>;

inline constexpr int kMaxDim = 7;
inline constexpr double kDropThreshold = 1e-14;

// A basis monomial phi_I ^ phibar_J stored as two bitmasks (bit k <-> index k,
// 0-based). Holomorphic factors come first, each group ascending.
struct Monomial {
  std::uint32_t hol = 0;
  std::uint32_t anti = 0;

  int p() const;
  int q() const;
  int degree() const { return p() + q(); }
  bool operator==(const Monomial&) const = default;
};

// Key used for sorting and dense indexing: hol | anti << n.
inline std::uint32_t monomial_key(int n, Monomial m) { return m.hol | (m.anti << n); }
inline Monomial key_monomial(int n, std::uint32_t key) {
  const std::uint32_t mask = (1u << n) - 1u;
  return {key & mask, key >> n};
}

// Sign of m1 ^ m2 relative to the canonical monomial m1 | m2 (0 if they overlap).
int wedge_sign(Monomial a, Monomial b);

// All monomials of bidegree (p, q) in dimension n, in key order.
std::vector<Monomial> bidegree_basis(int n, int p, int q);

struct Term {
  std::uint32_t key;
  cplx coeff;
};

// Immutable sparse element of the complexified exterior algebra on the
// coframe phi_1..phi_n, phibar_1..phibar_n.
class Form {
 public:
  explicit Form(int n = 1);

  static Form scalar(int n, cplx c);
  static Form monomial(int n, Monomial m, cplx c = 1.0);
  // Builds c * phi_{I} ^ phibar_{J} from unsorted index lists, applying the
  // reordering sign. Repeated indices give the zero form.
  static Form monomial(int n, const std::vector<int>& hol, const std::vector<int>& anti, cplx c = 1.0);
  static Form phi(int n, int k);
  static Form phibar(int n, int k);
  // Terms with |coeff| <= threshold are dropped; duplicate keys are summed.
  static Form from_terms(int n, std::vector<Term> terms, double threshold = kDropThreshold);

  int dim() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  cplx coeff(Monomial m) const;
  Monomial monomial_at(std::size_t i) const { return key_monomial(n_, terms_[i].key); }

  // Distinct bidegrees present, ascending.
  std::vector<std::pair<int, int>> bidegrees() const;
  // Set when the form is nonzero and of a single bidegree.
  std::optional<std::pair<int, int>> bidegree() const;
  bool is_homogeneous() const { return bidegrees().size() <= 1; }

  double max_abs() const;
  double norm() const;  // Euclidean norm of the coefficient vector

  Form pruned(double threshold) const;

  Form operator-() const;
  friend Form operator+(const Form& a, const Form& b);
  friend Form operator-(const Form& a, const Form& b);
  friend Form operator*(cplx c, const Form& a);
  friend Form operator*(const Form& a, cplx c) { return c * a; }
  friend Form operator/(const Form& a, cplx c) { return (1.0 / c) * a; }

 private:
  friend class FormAccumulator;
  static Form from_sorted_unchecked(int n, std::vector<Term> terms) {
    Form f(n);
    f.terms_ = std::move(terms);
    return f;
  }

  int n_;
  std::vector<Term> terms_;
};

// Dense scratch accumulator keyed by monomial key; used by every builder.
class FormAccumulator {
 public:
  explicit FormAccumulator(int n);
  void add(std::uint32_t key, cplx c);
  void add(Monomial m, cplx c) { add(monomial_key(n_, m), c); }
  void add(const Form& f, cplx scale = 1.0);
  Form build(double threshold = kDropThreshold) const;
  int dim() const { return n_; }

 private:
  int n_;
  std::vector<cplx> dense_;
  std::vector<char> used_;
  std::vector<std::uint32_t> touched_;
};

Form wedge(const Form& a, const Form& b);
Form linear_combine(const std::vector<cplx>& coeffs, const std::vector<Form>& forms);
Form conjugate(const Form& a);
Form bidegree_component(const Form& a, int p, int q);
Form degree_component(const Form& a, int k);
bool approx_equal(const Form& a, const Form& b, double tol);
// True when a equals its conjugate up to tol.
bool is_real(const Form& a, double tol);

// Coefficients of a on the bidegree (p, q) basis, and the inverse map.
Eigen::VectorXcd coefficient_vector(const Form& a, int p, int q);
Form from_coefficients(int n, int p, int q, const Eigen::VectorXcd& v);

// Linear change of coframe: phi_k -> sum_j A(k, j) phi_j, phibar_k -> conjugate.
// Minors of A are tabulated once so each monomial maps in O(C(n,p) C(n,q)).
class CoframeSubstitution {
 public:
  explicit CoframeSubstitution(const Eigen::MatrixXcd& a);
  Form apply(const Form& u) const;
  const Eigen::MatrixXcd& matrix() const { return a_; }

 private:
  int n_;
  Eigen::MatrixXcd a_;
  std::vector<cplx> minors_;  // minors_[rows << n | cols]
  std::vector<std::vector<std::uint32_t>> subsets_by_size_;
  cplx minor(std::uint32_t rows, std::uint32_t cols) const { return minors_[(rows << n_) | cols]; }
};

// Human-readable monomial label, e.g. "phi1^phi2^phibar3"; "1" for the unit.
std::string monomial_label(Monomial m);
std::string to_string(const Form& a);

}  // namespace starsplit
