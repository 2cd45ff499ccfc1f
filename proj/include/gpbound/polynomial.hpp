#ifndef GPBOUND_POLYNOMIAL_HPP
#define GPBOUND_POLYNOMIAL_HPP

#include <Eigen/Core>

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gpbound {

/// Thrown for malformed polynomial input (bad degree bound, dimension
/// mismatch, parse failure).
class PolynomialError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense exponent vector alpha in N^n.
class ExponentVector {
 public:
  ExponentVector() = default;
  explicit ExponentVector(std::size_t n) : e_(n, 0) {}
  ExponentVector(std::initializer_list<int> entries);
  explicit ExponentVector(std::vector<int> entries);

  /// d in slot i, zero elsewhere.
  static ExponentVector corner(std::size_t n, std::size_t i, int d);

  std::size_t size() const { return e_.size(); }
  int operator[](std::size_t i) const { return e_[i]; }
  const std::vector<int>& entries() const { return e_; }

  int order() const;
  bool is_zero() const;
  bool all_even() const;
  /// Index i when this is d*e_i for some d > 0.
  bool is_corner(int d, std::size_t* slot = nullptr) const;

  auto operator<=>(const ExponentVector&) const = default;
  bool operator==(const ExponentVector&) const = default;

 private:
  std::vector<int> e_;
};

/// Real polynomial in n variables stored as exponent -> coefficient.
/// Zero coefficients are never stored. Immutable once built.
class Polynomial {
 public:
  using TermMap = std::map<ExponentVector, double>;

  explicit Polynomial(std::size_t n = 0) : n_(n) {}
  Polynomial(std::size_t n, const std::vector<std::pair<ExponentVector, double>>& terms);

  static Polynomial constant(std::size_t n, double c);
  /// c * x_i^k
  static Polynomial monomial(std::size_t n, std::size_t i, int k, double c = 1.0);

  std::size_t n() const { return n_; }
  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  double coeff(const ExponentVector& alpha) const;
  double constant_term() const;
  /// Coefficient of x_i^d.
  double top(std::size_t i, int d) const;
  Eigen::VectorXd tops(int d) const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& p);

  bool operator==(const Polynomial& other) const = default;

 private:
  void add_term(const ExponentVector& alpha, double c);
  void refresh_degree();

  std::size_t n_ = 0;
  TermMap terms_;
  int degree_ = 0;
};

/// f(x) with 0^0 = 1.
double evaluate(const Polynomial& f, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Polynomial y -> f(N_1 y_1, ..., N_n y_n).
Polynomial rescale(const Polynomial& f, const Eigen::Ref<const Eigen::VectorXd>& N);

/// A term c x^alpha is a square in R[x] iff c > 0 and every alpha_i is even.
inline bool is_square_term(const ExponentVector& alpha, double c) {
  return c > 0.0 && alpha.all_even();
}

/// Omega(f), Delta(f) and its split by |alpha| against d, plus f_{d,i}.
struct IndexSets {
  std::vector<ExponentVector> omega;
  std::vector<ExponentVector> delta;
  std::vector<ExponentVector> delta_lt;
  std::vector<ExponentVector> delta_eq;
  Eigen::VectorXd top;
};

/// Throws PolynomialError unless d is even, d >= 2 and d >= deg f.
void require_degree_bound(const Polynomial& f, int d);

IndexSets index_sets(const Polynomial& f, int d);

/// g(0) + sum over Delta(-g) of g_alpha x^alpha + sum_i g_{d,i} x_i^d.
/// Everything in Omega(-g) \ Delta(-g) is discarded.
Polynomial truncate_to_delta_form(const Polynomial& g, int d);

/// The exponents truncate_to_delta_form(g, d) throws away.
std::vector<ExponentVector> dropped_by_truncation(const Polynomial& g, int d);

// Text form: "5*x1 + 6*x2 + x1^3 - x2^2". n == 0 infers n from the
// largest variable index.
Polynomial parse_polynomial(const std::string& text, std::size_t n = 0);
std::string format_polynomial(const Polynomial& f);

class ParseError : public PolynomialError {
 public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace gpbound

#endif  // GPBOUND_POLYNOMIAL_HPP
