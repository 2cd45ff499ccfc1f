#include "gpbound/verify.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace gpbound {

namespace {

// c - sum a_i x_i^d with c > 0 and every a_i > 0 bounds |x_i| <= (c / a_i)^(1/d).
// Returns per-variable limits (inf where this generator says nothing).
std::optional<Eigen::VectorXd> generator_box(const Polynomial& g, int d) {
  const auto n = g.n();
  Eigen::VectorXd lim = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), std::numeric_limits<double>::infinity());
  double c = 0.0;
  bool any = false;
  for (const auto& [alpha, coef] : g.terms()) {
    std::size_t slot = 0;
    if (alpha.is_zero()) {
      c = coef;
    } else if (alpha.is_corner(d, &slot) && coef < 0.0) {
      lim(static_cast<Eigen::Index>(slot)) = -coef;  // a_i for now
      any = true;
    } else {
      return std::nullopt;
    }
  }
  if (!any || c <= 0.0) return std::nullopt;
  for (Eigen::Index i = 0; i < lim.size(); ++i)
    if (std::isfinite(lim(i))) lim(i) = std::pow(c / lim(i), 1.0 / d);
  return lim;
}

bool in_set(const SemialgebraicProblem& p, const Eigen::VectorXd& x) {
  for (const auto& g : p.g)
    if (evaluate(g, x) < 0.0) return false;
  return true;
}

}  // namespace

std::optional<Eigen::VectorXd> infer_box(const SemialgebraicProblem& problem) {
  if (problem.box) return problem.box;
  const auto n = static_cast<Eigen::Index>(problem.n());
  Eigen::VectorXd box = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  for (const auto& g : problem.g)
    if (auto lim = generator_box(g, problem.d)) box = box.cwiseMin(*lim);
  if (!box.allFinite()) return std::nullopt;
  return box;
}

VerifyReport verify_bound(const SemialgebraicProblem& problem, double bound, const VerifyOptions& options) {
  VerifyReport r;
  r.bound = bound;
  r.min_f = std::numeric_limits<double>::infinity();
  auto box = options.box ? options.box : infer_box(problem);
  if (!box) {
    r.message = "no sampling box: supply one, K_g is not known to be bounded";
    return r;
  }
  if (box->size() != static_cast<Eigen::Index>(problem.n()) || (box->array() < 0.0).any() || !box->allFinite()) {
    r.message = "sampling box must have one finite nonnegative half-width per variable";
    return r;
  }
  r.ran = true;
  r.box = *box;
  const auto n = box->size();
  const std::size_t max_attempts = options.max_attempts ? options.max_attempts : 1000 * options.samples;

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  bool first = true;
  while (r.accepted < options.samples && r.attempted < max_attempts) {
    if (!first)
      for (Eigen::Index i = 0; i < n; ++i) x(i) = (*box)(i) * unit(rng);
    first = false;
    ++r.attempted;
    if (!in_set(problem, x)) continue;
    ++r.accepted;
    const double fx = evaluate(problem.f, x);
    if (fx < r.min_f) {
      r.min_f = fx;
      r.argmin = x;
    }
  }
  if (r.accepted == 0) {
    r.message = "no sample landed in K_g";
    return r;
  }
  r.margin = r.min_f - bound;
  r.pass = r.margin >= -options.tol;
  r.message = r.pass ? "ok" : "sampled point below the bound";
  return r;
}

}  // namespace gpbound
