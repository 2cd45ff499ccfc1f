#include "gpbound/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gpbound {

ExponentVector::ExponentVector(std::initializer_list<int> entries) : e_(entries) {
  for (int v : e_)
    if (v < 0) throw PolynomialError("negative exponent");
}

ExponentVector::ExponentVector(std::vector<int> entries) : e_(std::move(entries)) {
  for (int v : e_)
    if (v < 0) throw PolynomialError("negative exponent");
}

ExponentVector ExponentVector::corner(std::size_t n, std::size_t i, int d) {
  ExponentVector a(n);
  a.e_.at(i) = d;
  return a;
}

int ExponentVector::order() const { return std::accumulate(e_.begin(), e_.end(), 0); }

bool ExponentVector::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](int v) { return v == 0; });
}

bool ExponentVector::all_even() const {
  return std::all_of(e_.begin(), e_.end(), [](int v) { return v % 2 == 0; });
}

bool ExponentVector::is_corner(int d, std::size_t* slot) const {
  std::size_t found = e_.size();
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (e_[i] == 0) continue;
    if (e_[i] != d || found != e_.size()) return false;
    found = i;
  }
  if (found == e_.size()) return false;
  if (slot) *slot = found;
  return true;
}

Polynomial::Polynomial(std::size_t n, const std::vector<std::pair<ExponentVector, double>>& terms)
    : n_(n) {
  for (const auto& [alpha, c] : terms) add_term(alpha, c);
  refresh_degree();
}

Polynomial Polynomial::constant(std::size_t n, double c) {
  return Polynomial(n, {{ExponentVector(n), c}});
}

Polynomial Polynomial::monomial(std::size_t n, std::size_t i, int k, double c) {
  if (i >= n) throw PolynomialError("variable index out of range");
  std::vector<int> e(n, 0);
  e[i] = k;
  return Polynomial(n, {{ExponentVector(std::move(e)), c}});
}

void Polynomial::add_term(const ExponentVector& alpha, double c) {
  if (alpha.size() != n_) throw PolynomialError("exponent length does not match variable count");
  if (!std::isfinite(c)) throw PolynomialError("non-finite coefficient");
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(alpha, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

void Polynomial::refresh_degree() {
  degree_ = 0;
  for (const auto& [alpha, c] : terms_) degree_ = std::max(degree_, alpha.order());
}

double Polynomial::coeff(const ExponentVector& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::constant_term() const { return coeff(ExponentVector(n_)); }

double Polynomial::top(std::size_t i, int d) const { return coeff(ExponentVector::corner(n_, i, d)); }

Eigen::VectorXd Polynomial::tops(int d) const {
  Eigen::VectorXd t(static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < n_; ++i) t[static_cast<Eigen::Index>(i)] = top(i, d);
  return t;
}

Polynomial Polynomial::operator-() const { return -1.0 * *this; }

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  if (a.n_ != b.n_) throw PolynomialError("variable count mismatch");
  Polynomial r = a;
  for (const auto& [alpha, c] : b.terms_) r.add_term(alpha, c);
  r.refresh_degree();
  return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0 * b); }

Polynomial operator*(double s, const Polynomial& p) {
  Polynomial r(p.n_);
  if (s == 0.0) return r;
  for (const auto& [alpha, c] : p.terms_) r.add_term(alpha, s * c);
  r.refresh_degree();
  return r;
}

double evaluate(const Polynomial& f, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (static_cast<std::size_t>(x.size()) != f.n())
    throw PolynomialError("point dimension does not match variable count");
  double sum = 0.0;
  for (const auto& [alpha, c] : f.terms()) {
    double m = c;
    for (std::size_t i = 0; i < alpha.size(); ++i)
      if (alpha[i] != 0) m *= std::pow(x[static_cast<Eigen::Index>(i)], alpha[i]);
    sum += m;
  }
  return sum;
}

Polynomial rescale(const Polynomial& f, const Eigen::Ref<const Eigen::VectorXd>& N) {
  if (static_cast<std::size_t>(N.size()) != f.n()) throw PolynomialError("scale vector has wrong length");
  if ((N.array() <= 0.0).any()) throw PolynomialError("scale factors must be positive");
  std::vector<std::pair<ExponentVector, double>> terms;
  for (const auto& [alpha, c] : f.terms()) {
    double s = c;
    for (std::size_t i = 0; i < alpha.size(); ++i) s *= std::pow(N[static_cast<Eigen::Index>(i)], alpha[i]);
    terms.emplace_back(alpha, s);
  }
  return Polynomial(f.n(), terms);
}

void require_degree_bound(const Polynomial& f, int d) {
  if (d < 2 || d % 2 != 0) throw PolynomialError("degree bound d must be even and at least 2");
  if (d < f.degree()) throw PolynomialError("degree bound d is below the polynomial degree");
}

IndexSets index_sets(const Polynomial& f, int d) {
  require_degree_bound(f, d);
  IndexSets s;
  for (const auto& [alpha, c] : f.terms()) {
    if (alpha.is_zero() || alpha.is_corner(d)) continue;
    s.omega.push_back(alpha);
    if (is_square_term(alpha, c)) continue;
    s.delta.push_back(alpha);
    (alpha.order() < d ? s.delta_lt : s.delta_eq).push_back(alpha);
  }
  s.top = f.tops(d);
  return s;
}

Polynomial truncate_to_delta_form(const Polynomial& g, int d) {
  require_degree_bound(g, d);
  std::vector<std::pair<ExponentVector, double>> kept;
  for (const auto& [alpha, c] : g.terms()) {
    // -g has coefficient -c; the term is dropped when that is a square.
    if (!alpha.is_zero() && !alpha.is_corner(d) && is_square_term(alpha, -c)) continue;
    kept.emplace_back(alpha, c);
  }
  return Polynomial(g.n(), kept);
}

std::vector<ExponentVector> dropped_by_truncation(const Polynomial& g, int d) {
  require_degree_bound(g, d);
  std::vector<ExponentVector> out;
  for (const auto& [alpha, c] : g.terms())
    if (!alpha.is_zero() && !alpha.is_corner(d) && is_square_term(alpha, -c)) out.push_back(alpha);
  return out;
}

}  // namespace gpbound
