#ifndef GPBOUND_VERIFY_HPP
#define GPBOUND_VERIFY_HPP

#include "gpbound/bounds.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace gpbound {

/// Half-widths N with K_g inside prod [-N_i, N_i]: problem.box when set,
/// otherwise read off generators of the form c - sum a_i x_i^d (a_i > 0,
/// no other terms). Empty when some variable stays unbounded.
std::optional<Eigen::VectorXd> infer_box(const SemialgebraicProblem& problem);

struct VerifyOptions {
  std::size_t samples = 1000;       // accepted points wanted
  std::size_t max_attempts = 0;     // 0: 1000 * samples
  std::uint64_t seed = 1;
  double tol = 1e-6;
  std::optional<Eigen::VectorXd> box;  // overrides inference
};

struct VerifyReport {
  bool ran = false;       // false when no box was available
  bool pass = false;
  double bound = 0.0;
  double min_f = 0.0;     // +inf when nothing was accepted
  double margin = 0.0;    // min_f - bound
  Eigen::VectorXd argmin;
  std::size_t accepted = 0;
  std::size_t attempted = 0;
  Eigen::VectorXd box;
  std::string message;
};

/// Rejection-samples K_g uniformly inside the box and checks f(x) >= bound - tol
/// at every accepted point. The origin is tried first when it lies in K_g.
VerifyReport verify_bound(const SemialgebraicProblem& problem, double bound, const VerifyOptions& options = {});

}  // namespace gpbound

#endif  // GPBOUND_VERIFY_HPP
