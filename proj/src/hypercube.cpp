#include "gpbound/hypercube.hpp"

#include <cmath>

namespace gpbound {

std::vector<ExponentVector> delta_prime(const Polynomial& f) {
  std::vector<ExponentVector> out;
  for (const auto& [alpha, c] : f.terms())
    if (!alpha.is_zero() && !is_square_term(alpha, c)) out.push_back(alpha);
  return out;
}

TrivialBoundReport trivial_bound(const Polynomial& f, const Eigen::VectorXd& N) {
  if (static_cast<std::size_t>(N.size()) != f.n()) throw ProblemError("box has the wrong length");
  if ((N.array() <= 0).any() || !N.allFinite()) throw ProblemError("box half-widths must be positive");
  TrivialBoundReport r;
  r.delta_prime = delta_prime(f);
  r.f_tr = f.constant_term();
  for (const auto& alpha : r.delta_prime) {
    double v = std::abs(f.coeff(alpha));
    for (std::size_t i = 0; i < alpha.size(); ++i) v *= std::pow(N[static_cast<Eigen::Index>(i)], alpha[i]);
    r.per_term[alpha] = v;
    r.f_tr -= v;
  }
  return r;
}

HypercubeComparison compare_with_gp(const Polynomial& f, const Eigen::VectorXd& N, int d,
                                    const gp::SolverOptions& options, double tol) {
  HypercubeComparison c;
  c.trivial = trivial_bound(f, N).f_tr;
  c.gp = lower_bound_constrained(hypercube_problem(f, N, d), PathChoice::Canonical, options);
  c.equality_clause = (f.tops(d).array() <= 0).all();
  if (!c.gp.is_bound()) return c;
  c.gap = c.gp.value - c.trivial;
  c.dominance_holds = c.gap >= -tol;
  c.equality_holds = std::abs(c.gap) <= tol * (1.0 + std::abs(c.trivial));
  return c;
}

}  // namespace gpbound
