#ifndef GPBOUND_BOUNDS_HPP
#define GPBOUND_BOUNDS_HPP

#include "gpbound/gp.hpp"
#include "gpbound/polynomial.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace gpbound {

class ProblemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The (m+1)x(m+1) multiplier change lambda_j = sum_k a_jk mu_k, with mu_0 = 1.
/// Row 0 is always (1, 0, ..., 0).
class TransformMatrix {
 public:
  explicit TransformMatrix(Eigen::MatrixXd a);
  static TransformMatrix identity(std::size_t m);

  std::size_t m() const { return static_cast<std::size_t>(a_.rows()) - 1; }
  double operator()(std::size_t j, std::size_t k) const {
    return a_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
  }
  const Eigen::MatrixXd& matrix() const { return a_; }

 private:
  Eigen::MatrixXd a_;
};

/// Lower bound problem for f on K_g = {x : g_j(x) >= 0}.
struct SemialgebraicProblem {
  Polynomial f;
  std::vector<Polynomial> g;
  int d = 2;
  std::optional<TransformMatrix> A;
  /// Half-widths of a box known to contain K_g (used by the sampler).
  std::optional<Eigen::VectorXd> box;

  std::size_t n() const { return f.n(); }
  std::size_t m() const { return g.size(); }
  /// g_0 := -f, g_j otherwise.
  Polynomial generator(std::size_t j) const { return j == 0 ? -f : g[j - 1]; }
  /// Throws ProblemError on dimension mismatch or a bad degree bound.
  void validate() const;
};

/// Least even d >= max{2, deg f, deg g_j}.
int default_degree_bound(const Polynomial& f, const std::vector<Polynomial>& g);

struct NormalizedProblem {
  SemialgebraicProblem problem;
  std::vector<std::string> diagnostics;  // one line per dropped generator term
};

/// Replaces every g_j (j >= 1) by its truncation so that Omega(-g_j) = Delta(-g_j).
NormalizedProblem normalize(const SemialgebraicProblem& problem);

enum class BoundStatus { Bound, NegInfinity, NotAGeometricProgram, Infeasible };
enum class TheoremPath { Unconstrained, Canonical, SingleGenerator, TwoGenerators, Identity, UserMatrix };
enum class PathChoice { Auto, Canonical, SingleGenerator, TwoGenerators, Identity, Subset };

std::string to_string(BoundStatus s);
std::string to_string(TheoremPath p);
std::string to_string(PathChoice p);
/// Accepts auto|canonical|m1|m2|identity|subset.
PathChoice parse_path(const std::string& s);

struct ZValue {
  ExponentVector alpha;
  std::size_t i = 0;
  double value = 0.0;
};

struct WValue {
  ExponentVector alpha;
  double value = 0.0;
  bool eliminated = false;  // replaced by the single monomial bounding it
};

struct Witness {
  std::vector<ZValue> z;
  std::vector<WValue> w;
  Eigen::VectorXd mu;      // mu_1..mu_m
  Eigen::VectorXd lambda;  // lambda_1..lambda_m recovered through A
};

struct BoundResult {
  BoundStatus status = BoundStatus::NotAGeometricProgram;
  double value = 0.0;  // -inf for NegInfinity, NaN when no bound was produced
  TheoremPath path = TheoremPath::Unconstrained;
  std::optional<TransformMatrix> A;
  std::vector<std::size_t> generator_subset;  // indices into g actually used
  Witness witness;
  gp::Status solver_status = gp::Status::Optimal;
  double kkt_residual = 0.0;
  std::vector<std::string> diagnostics;

  bool is_bound() const { return status == BoundStatus::Bound; }
};

// ---------------------------------------------------------------------------
// Unconstrained bound f_gp = f(0) - rho(f).

struct ZIndex {
  ExponentVector alpha;
  std::size_t i = 0;
  int var = 0;
};

struct UnconstrainedProgram {
  enum class Kind { Program, ConstantBound, NegInfinity };
  Kind kind = Kind::Program;
  gp::GeometricProgram gp;
  std::vector<ZIndex> z;
  bool objective_empty = false;
  double constant = 0.0;  // f(0)
  std::string reason;
};

UnconstrainedProgram build_unconstrained(const Polynomial& f, int d);
BoundResult lower_bound_unconstrained(const Polynomial& f, int d, const gp::SolverOptions& options = {});

// ---------------------------------------------------------------------------
// Constrained relaxation.

/// j_i per variable: the largest j with (g_j)_{d,i} != 0, required negative.
struct StarAssignment {
  bool ok = false;
  std::vector<std::size_t> j_of_i;
  std::size_t failing_i = 0;
  std::string reason;
};

StarAssignment condition_star(const SemialgebraicProblem& problem);
/// Exactly one of (g_0)_{d,i}, ..., (g_m)_{d,i} is negative, for every i.
bool condition_dagger(const SemialgebraicProblem& problem);

/// Lower triangular, unit diagonal, a_jk <= 0 below the diagonal. Throws
/// ProblemError when condition_star fails.
TransformMatrix canonical_matrix(const SemialgebraicProblem& problem);

/// Margin added to thresholds that the multiplier must exceed strictly.
inline constexpr double kStrictMargin = 1e-6;

/// A = [[1,0],[-c,1]] for a single generator. Throws ProblemError when some
/// (g_1)_{d,i} = 0 has f_{d,i} <= 0.
TransformMatrix matrix_for_m1(const SemialgebraicProblem& problem);
/// A = [[1,0,0],[0,1,0],[0,-c,1]] for two generators and vanishing f_{d,i}.
TransformMatrix matrix_for_m2(const SemialgebraicProblem& problem);

/// h_k = sum_j a_jk g_j, k = 0..m (g_0 = -f).
std::vector<Polynomial> transformed_generators(const SemialgebraicProblem& problem, const TransformMatrix& A);

/// Delta(f) union Delta(-g_j), sorted.
std::vector<ExponentVector> combined_delta(const SemialgebraicProblem& problem);

struct HypothesisCheck {
  bool ok = true;
  std::string violation;
  std::vector<int> j_of_i;  // -1 for a column with no negative entry and no z variables
};

HypothesisCheck check_gp_hypothesis(const SemialgebraicProblem& problem, const TransformMatrix& A);

struct WIndex {
  ExponentVector alpha;
  int var = -1;                     // -1 when eliminated
  double log_coefficient = 0.0;     // eliminated: w = exp(log_coefficient) * mu_j
  int mu_var = -1;                  // eliminated: GP variable of mu_j, -1 for mu_0
};

struct RelaxationProgram {
  HypothesisCheck hypothesis;
  gp::GeometricProgram gp;
  std::vector<Polynomial> h;
  std::vector<ZIndex> z;
  std::vector<WIndex> w;
  std::vector<int> mu_var;  // mu_var[j-1] is the GP variable of mu_j
  std::vector<ExponentVector> dropped;  // alpha in Delta with H(mu)_alpha identically zero
  bool objective_empty = false;
  double offset = 0.0;  // -h_0(0)
};

/// Expects a normalized problem.
RelaxationProgram build_relaxation(const SemialgebraicProblem& problem, const TransformMatrix& A);

/// Picks A from `path` (or problem.A when set), builds and solves the program.
BoundResult lower_bound_constrained(const SemialgebraicProblem& problem, PathChoice path = PathChoice::Auto,
                                    const gp::SolverOptions& options = {});

struct SubsetSelection {
  std::vector<std::size_t> indices;  // into problem.g
  bool via_star = false;             // otherwise via condition_dagger
};

/// Largest subset of g (at most 8 generators) satisfying condition_star or
/// condition_dagger; K_g lies inside K of any subset.
std::optional<SubsetSelection> select_generator_subset(const SemialgebraicProblem& problem);

SemialgebraicProblem restrict_generators(const SemialgebraicProblem& problem, const std::vector<std::size_t>& keep);

// ---------------------------------------------------------------------------
// Standard constraint sets.

/// g = (M - sum x_i^d)
SemialgebraicProblem hyperellipsoid_problem(const Polynomial& f, double M, int d);
/// g_i = N_i^d - x_i^d
SemialgebraicProblem hypercube_problem(const Polynomial& f, const Eigen::VectorXd& N, int d);
/// g_j = 1 - sum_{i in I_j} (x_i / N_i)^d. Blocks are zero-based and must
/// partition {0, ..., n-1}.
SemialgebraicProblem partition_problem(const Polynomial& f, const Eigen::VectorXd& N,
                                       const std::vector<std::vector<std::size_t>>& partition, int d);

}  // namespace gpbound

#endif  // GPBOUND_BOUNDS_HPP
