#ifndef GPBOUND_GP_HPP
#define GPBOUND_GP_HPP

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gpbound::gp {

class GPError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One factor x_var^power of a monomial function.
struct Factor {
  int var = 0;
  double power = 0.0;
};

/// c * prod x_i^{a_i}, c > 0, real exponents. Exponents are stored sparsely;
/// variables that do not appear have exponent zero.
struct Monomial {
  double coefficient = 1.0;
  std::vector<Factor> factors;

  Monomial() = default;
  Monomial(double c, std::vector<Factor> f) : coefficient(c), factors(std::move(f)) {}

  /// Build from log(c) so very small or large coefficients are formed once.
  static Monomial from_log(double log_c, std::vector<Factor> f);

  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Dense exponent row of length var_count.
  Eigen::VectorXd exponents(int var_count) const;
};

struct Posynomial {
  std::vector<Monomial> terms;

  bool empty() const { return terms.empty(); }
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

/// minimize objective(x) s.t. inequalities[k](x) <= 1, equalities[k](x) = 1, x > 0.
struct GeometricProgram {
  int var_count = 0;
  Posynomial objective;
  std::vector<Posynomial> inequalities;
  std::vector<Monomial> equalities;
  std::vector<std::string> var_names;

  /// Throws GPError on an empty objective, nonpositive coefficients or
  /// out-of-range variable indices.
  void validate() const;
  std::string name(int var) const;
};

/// log sum_k exp(a_k . u + b_k); rows stored sparsely.
struct LogSumExp {
  std::vector<std::vector<std::pair<int, double>>> rows;
  Eigen::VectorXd offsets;

  double value(const Eigen::Ref<const Eigen::VectorXd>& u) const;
  bool affine() const { return rows.size() == 1; }
};

/// The program after x = exp(u): convex objective and inequalities,
/// affine equalities eq_matrix * u = eq_rhs.
struct ConvexProgram {
  int dim = 0;
  LogSumExp objective;
  std::vector<LogSumExp> inequalities;
  Eigen::MatrixXd eq_matrix;
  Eigen::VectorXd eq_rhs;
};

ConvexProgram log_transform(const GeometricProgram& gp);

enum class Status { Optimal, Infeasible, Unbounded, MaxIter };
std::string to_string(Status s);

struct SolverOptions {
  double tol = 1e-8;
  double mu_initial = 1.0;
  double mu_factor = 10.0;
  double log_floor = -50.0;
  double armijo_slope = 1e-4;
  double backtrack = 0.5;
  int max_newton = 4000;
  // phase 1 stops once every inequality has log-slack at least this
  double phase1_margin = 1e-3;
  // The solver keeps |log x_i| <= log_box, so optima approached only as some
  // x_i -> 0 or infinity stay representable; the box only shrinks the feasible
  // set. Zero disables it.
  double log_box = 40.0;
};

struct GPResult {
  Status status = Status::MaxIter;
  double value = 0.0;        // objective at point
  Eigen::VectorXd point;     // x > 0
  Eigen::VectorXd duals;     // inequality multipliers of the log problem
  double kkt_residual = 0.0;
  int newton_steps = 0;
  std::string message;
};

GPResult solve(const GeometricProgram& gp, const SolverOptions& options = {});

struct FeasibilityReport {
  double max_inequality_violation = 0.0;  // max_k (P_k(x) - 1), may be negative
  double max_equality_log_residual = 0.0; // max_k |log psi_k(x)|
  double objective = 0.0;
};

FeasibilityReport check_feasible(const GeometricProgram& gp, const Eigen::Ref<const Eigen::VectorXd>& x);

/// JSON listing of every term, for reproducing solver runs.
std::string dump_json(const GeometricProgram& gp);

}  // namespace gpbound::gp

#endif  // GPBOUND_GP_HPP
