#ifndef GPBOUND_HYPERCUBE_HPP
#define GPBOUND_HYPERCUBE_HPP

#include "gpbound/bounds.hpp"

#include <map>

namespace gpbound {

/// Exponents alpha != 0 whose term is not a square. Unlike Delta(f) this keeps
/// the x_i^d corners and has no degree cap.
std::vector<ExponentVector> delta_prime(const Polynomial& f);

struct TrivialBoundReport {
  double f_tr = 0.0;
  std::vector<ExponentVector> delta_prime;
  std::map<ExponentVector, double> per_term;  // |f_alpha| N^alpha
};

/// f(0) - sum over delta_prime of |f_alpha| N^alpha: a lower bound on prod [-N_i, N_i].
TrivialBoundReport trivial_bound(const Polynomial& f, const Eigen::VectorXd& N);

struct HypercubeComparison {
  double trivial = 0.0;
  BoundResult gp;
  double gap = 0.0;             // gp.value - trivial
  bool equality_clause = false; // every f_{d,i} <= 0, so the two must agree
  bool dominance_holds = false; // gp >= trivial - tol
  bool equality_holds = false;  // only meaningful when equality_clause
};

/// Solves the hypercube problem through the canonical matrix and compares it
/// with the trivial bound.
HypercubeComparison compare_with_gp(const Polynomial& f, const Eigen::VectorXd& N, int d,
                                    const gp::SolverOptions& options = {}, double tol = 1e-6);

}  // namespace gpbound

#endif  // GPBOUND_HYPERCUBE_HPP
