#include "gpbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace gpbound {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
// Slack tolerated when re-checking the final point; the effect on the bound is of the same order.
constexpr double kFeasibilitySlack = 1e-9;

std::string alpha_name(const ExponentVector& a) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
  os << ')';
  return os.str();
}

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

struct Builder {
  gp::GeometricProgram gp;

  int add_var(std::string name) {
    gp.var_names.push_back(std::move(name));
    return gp.var_count++;
  }
};

// (d-|a|) [ (w/d)^d prod (a_i/z_i)^{a_i} ]^{1/(d-|a|)} with w = exp(log_w) * prod w_factors.
gp::Monomial objective_term(const ExponentVector& alpha, int d, double log_w, const std::vector<gp::Factor>& w_factors,
                            const std::vector<std::pair<std::size_t, int>>& z_vars) {
  const double gap = d - alpha.order();
  double log_inner = d * (log_w - std::log(static_cast<double>(d)));
  std::vector<gp::Factor> factors;
  for (const auto& f : w_factors) factors.push_back({f.var, f.power * d / gap});
  for (const auto& [i, var] : z_vars) {
    log_inner += alpha[i] * std::log(static_cast<double>(alpha[i]));
    factors.push_back({var, -alpha[i] / gap});
  }
  return gp::Monomial::from_log(std::log(gap) + log_inner / gap, std::move(factors));
}

// (w/d)^d prod (a_i/z_i)^{a_i} <= 1, the weakened form of the =d equality.
gp::Monomial top_degree_term(const ExponentVector& alpha, int d, double log_w, const std::vector<gp::Factor>& w_factors,
                             const std::vector<std::pair<std::size_t, int>>& z_vars) {
  double log_c = d * (log_w - std::log(static_cast<double>(d)));
  std::vector<gp::Factor> factors;
  for (const auto& f : w_factors) factors.push_back({f.var, f.power * d});
  for (const auto& [i, var] : z_vars) {
    log_c += alpha[i] * std::log(static_cast<double>(alpha[i]));
    factors.push_back({var, -static_cast<double>(alpha[i])});
  }
  return gp::Monomial::from_log(log_c, std::move(factors));
}

std::vector<std::pair<std::size_t, int>> make_z(Builder& b, std::vector<ZIndex>& z, const ExponentVector& alpha) {
  std::vector<std::pair<std::size_t, int>> out;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == 0) continue;
    int v = b.add_var("z" + alpha_name(alpha) + "_" + std::to_string(i + 1));
    z.push_back({alpha, i, v});
    out.emplace_back(i, v);
  }
  return out;
}

BoundResult no_bound(BoundStatus s, std::string why) {
  BoundResult r;
  r.status = s;
  r.value = s == BoundStatus::NegInfinity ? -kInf : kNaN;
  r.diagnostics.push_back(std::move(why));
  return r;
}

struct Solved {
  bool feasible = false;
  double rho = 0.0;
  gp::GPResult result;
  std::vector<std::string> diagnostics;
};

// Solves and decides whether the final point certifies a bound. The bound is
// always computed from the objective at a point that satisfies the program,
// so MaxIter with a feasible point is still sound.
Solved solve_and_check(const gp::GeometricProgram& prog, bool objective_empty, const gp::SolverOptions& options) {
  Solved s;
  s.result = gp::solve(prog, options);
  const auto& r = s.result;
  if (r.point.size() != prog.var_count) {
    s.diagnostics.push_back("solver: " + gp::to_string(r.status) + (r.message.empty() ? "" : " (" + r.message + ")"));
    return s;
  }
  auto rep = gp::check_feasible(prog, r.point);
  const bool ok = rep.max_inequality_violation <= kFeasibilitySlack && rep.max_equality_log_residual <= options.tol;
  if (r.status == gp::Status::Infeasible) {
    s.diagnostics.push_back("solver: " + gp::to_string(r.status) + (r.message.empty() ? "" : " (" + r.message + ")"));
    if (!ok) return s;
    // Phase 1 ended on the boundary of a program with empty interior; any
    // feasible point still certifies a bound.
    s.diagnostics.push_back("program has no strictly feasible point; objective taken at a boundary point");
  } else if (!ok) {
    s.diagnostics.push_back("solver returned a point violating the program by " +
                            std::to_string(rep.max_inequality_violation));
    return s;
  }
  s.feasible = true;
  s.rho = objective_empty ? 0.0 : rep.objective;
  if (r.status == gp::Status::Unbounded) s.diagnostics.push_back("objective unbounded below: rho taken at the floor point");
  if (r.status == gp::Status::MaxIter)
    s.diagnostics.push_back("solver stopped before convergence (" + r.message + "); bound is valid but may be loose");
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------

TransformMatrix::TransformMatrix(Eigen::MatrixXd a) : a_(std::move(a)) {
  if (a_.rows() < 1 || a_.rows() != a_.cols()) throw ProblemError("transform matrix must be square and nonempty");
  if (!a_.allFinite()) throw ProblemError("transform matrix has non-finite entries");
  if (a_(0, 0) != 1.0 || (a_.cols() > 1 && !a_.row(0).tail(a_.cols() - 1).isZero(0.0)))
    throw ProblemError("first row of the transform matrix must be (1, 0, ..., 0)");
}

TransformMatrix TransformMatrix::identity(std::size_t m) {
  return TransformMatrix(Eigen::MatrixXd::Identity(ix(m + 1), ix(m + 1)));
}

void SemialgebraicProblem::validate() const {
  if (n() == 0) throw ProblemError("problem needs at least one variable");
  if (d < 2 || d % 2 != 0) throw ProblemError("degree bound d must be even and at least 2");
  if (f.degree() > d) throw ProblemError("deg f exceeds d");
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (g[j].n() != n()) throw ProblemError("generator g" + std::to_string(j + 1) + " has the wrong variable count");
    if (g[j].degree() > d) throw ProblemError("deg g" + std::to_string(j + 1) + " exceeds d");
  }
  if (A && A->m() != m()) throw ProblemError("transform matrix size does not match the number of generators");
  if (box) {
    if (static_cast<std::size_t>(box->size()) != n()) throw ProblemError("box has the wrong length");
    if ((box->array() <= 0.0).any() || !box->allFinite()) throw ProblemError("box half-widths must be positive");
  }
}

int default_degree_bound(const Polynomial& f, const std::vector<Polynomial>& g) {
  int deg = std::max(2, f.degree());
  for (const auto& gj : g) deg = std::max(deg, gj.degree());
  return deg + deg % 2;
}

NormalizedProblem normalize(const SemialgebraicProblem& problem) {
  problem.validate();
  NormalizedProblem out{problem, {}};
  // Delta is the same before and after truncation. A square term of -g_j at
  // an exponent that is in Delta anyway stays: it enters H(mu)_alpha and can
  // only offset the other contributions there.
  const auto delta = combined_delta(problem);
  for (std::size_t j = 0; j < problem.g.size(); ++j) {
    const auto& gj = problem.g[j];
    std::vector<std::pair<ExponentVector, double>> kept(gj.terms().begin(), gj.terms().end());
    for (const auto& alpha : dropped_by_truncation(gj, problem.d)) {
      Polynomial term(gj.n(), {{alpha, gj.coeff(alpha)}});
      const std::string label = "g" + std::to_string(j + 1) + ": ";
      if (std::binary_search(delta.begin(), delta.end(), alpha)) {
        out.diagnostics.push_back(label + "kept square term " + format_polynomial(term) + " (exponent lies in Delta)");
        continue;
      }
      out.diagnostics.push_back(label + "dropped term " + format_polynomial(term));
      std::erase_if(kept, [&](const auto& t) { return t.first == alpha; });
    }
    out.problem.g[j] = Polynomial(gj.n(), kept);
  }
  return out;
}

std::string to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::Bound: return "Bound";
    case BoundStatus::NegInfinity: return "NegInfinity";
    case BoundStatus::NotAGeometricProgram: return "NotAGeometricProgram";
    case BoundStatus::Infeasible: return "Infeasible";
  }
  return "?";
}

std::string to_string(TheoremPath p) {
  switch (p) {
    case TheoremPath::Unconstrained: return "unconstrained";
    case TheoremPath::Canonical: return "canonical";
    case TheoremPath::SingleGenerator: return "m1";
    case TheoremPath::TwoGenerators: return "m2";
    case TheoremPath::Identity: return "identity";
    case TheoremPath::UserMatrix: return "user";
  }
  return "?";
}

std::string to_string(PathChoice p) {
  switch (p) {
    case PathChoice::Auto: return "auto";
    case PathChoice::Canonical: return "canonical";
    case PathChoice::SingleGenerator: return "m1";
    case PathChoice::TwoGenerators: return "m2";
    case PathChoice::Identity: return "identity";
    case PathChoice::Subset: return "subset";
  }
  return "?";
}

PathChoice parse_path(const std::string& s) {
  for (auto p : {PathChoice::Auto, PathChoice::Canonical, PathChoice::SingleGenerator, PathChoice::TwoGenerators,
                 PathChoice::Identity, PathChoice::Subset})
    if (to_string(p) == s) return p;
  throw ProblemError("unknown path '" + s + "'");
}

// ---------------------------------------------------------------------------

UnconstrainedProgram build_unconstrained(const Polynomial& f, int d) {
  auto sets = index_sets(f, d);
  UnconstrainedProgram out;
  out.constant = f.constant_term();
  const std::size_t n = f.n();

  std::vector<bool> used(n, false);
  for (const auto& a : sets.delta)
    for (std::size_t i = 0; i < n; ++i) used[i] = used[i] || a[i] > 0;
  for (std::size_t i = 0; i < n; ++i) {
    double top = sets.top[ix(i)];
    if (top < 0 || (top == 0 && used[i])) {
      out.kind = UnconstrainedProgram::Kind::NegInfinity;
      out.reason = "x" + std::to_string(i + 1) + "^" + std::to_string(d) + " coefficient " + std::to_string(top) +
                   (top < 0 ? " is negative" : " cannot dominate the terms using this variable") +
                   ": the program is infeasible";
      return out;
    }
  }
  if (sets.delta.empty()) {
    out.kind = UnconstrainedProgram::Kind::ConstantBound;
    out.reason = "no non-square terms: the bound is f(0)";
    return out;
  }

  Builder b;
  std::vector<gp::Posynomial> rows(n);
  for (const auto& alpha : sets.delta) {
    auto zv = make_z(b, out.z, alpha);
    double log_w = std::log(std::abs(f.coeff(alpha)));
    if (alpha.order() < d)
      b.gp.objective.terms.push_back(objective_term(alpha, d, log_w, {}, zv));
    else
      b.gp.inequalities.push_back(gp::Posynomial{{top_degree_term(alpha, d, log_w, {}, zv)}});
    for (const auto& [i, v] : zv) rows[i].terms.push_back(gp::Monomial(1.0 / sets.top[ix(i)], {{v, 1.0}}));
  }
  for (auto& r : rows)
    if (!r.empty()) b.gp.inequalities.push_back(std::move(r));
  if (b.gp.objective.empty()) {
    out.objective_empty = true;
    b.gp.objective.terms.push_back(gp::Monomial(1.0, {}));
  }
  out.gp = std::move(b.gp);
  return out;
}

BoundResult lower_bound_unconstrained(const Polynomial& f, int d, const gp::SolverOptions& options) {
  auto prog = build_unconstrained(f, d);
  using K = UnconstrainedProgram::Kind;
  if (prog.kind == K::NegInfinity) return no_bound(BoundStatus::NegInfinity, prog.reason);
  BoundResult r;
  r.path = TheoremPath::Unconstrained;
  r.A = TransformMatrix::identity(0);
  if (prog.kind == K::ConstantBound) {
    r.status = BoundStatus::Bound;
    r.value = prog.constant;
    r.diagnostics.push_back(prog.reason);
    return r;
  }
  auto s = solve_and_check(prog.gp, prog.objective_empty, options);
  r.solver_status = s.result.status;
  r.kkt_residual = s.result.kkt_residual;
  r.diagnostics = s.diagnostics;
  if (!s.feasible) {
    // Cannot happen for a well-posed (2.1): z small enough is always feasible.
    r.status = BoundStatus::Infeasible;
    r.value = kNaN;
    return r;
  }
  r.status = BoundStatus::Bound;
  r.value = prog.constant - s.rho;
  for (const auto& z : prog.z) r.witness.z.push_back({z.alpha, z.i, s.result.point[z.var]});
  for (const auto& alpha : index_sets(f, d).delta) r.witness.w.push_back({alpha, std::abs(f.coeff(alpha)), true});
  return r;
}

// ---------------------------------------------------------------------------

StarAssignment condition_star(const SemialgebraicProblem& problem) {
  StarAssignment out;
  const std::size_t n = problem.n(), m = problem.m();
  std::vector<Eigen::VectorXd> tops;
  for (std::size_t j = 0; j <= m; ++j) tops.push_back(problem.generator(j).tops(problem.d));
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t last = m + 1;
    for (std::size_t j = m + 1; j-- > 0;)
      if (tops[j][ix(i)] != 0.0) {
        last = j;
        break;
      }
    if (last == m + 1 || tops[last][ix(i)] > 0) {
      out.failing_i = i;
      out.reason = "condition (*) fails at x" + std::to_string(i + 1) +
                   (last == m + 1 ? ": every top coefficient is zero"
                                  : ": the last nonzero top coefficient (generator " + std::to_string(last) +
                                        ") is positive");
      return out;
    }
    out.j_of_i.push_back(last);
  }
  out.ok = true;
  return out;
}

bool condition_dagger(const SemialgebraicProblem& problem) {
  const std::size_t n = problem.n(), m = problem.m();
  std::vector<int> negatives(n, 0);
  for (std::size_t j = 0; j <= m; ++j) {
    auto t = problem.generator(j).tops(problem.d);
    for (std::size_t i = 0; i < n; ++i) negatives[i] += t[ix(i)] < 0;
  }
  return std::all_of(negatives.begin(), negatives.end(), [](int c) { return c == 1; });
}

TransformMatrix canonical_matrix(const SemialgebraicProblem& problem) {
  auto star = condition_star(problem);
  if (!star.ok) throw ProblemError(star.reason);
  const std::size_t n = problem.n(), m = problem.m();
  Eigen::MatrixXd tops(ix(m + 1), ix(n));  // tops(j, i) = (g_j)_{d,i}
  for (std::size_t j = 0; j <= m; ++j) tops.row(ix(j)) = problem.generator(j).tops(problem.d).transpose();

  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(ix(m + 1), ix(m + 1));
  for (std::size_t j = 1; j <= m; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (star.j_of_i[i] != j) continue;
        double partial = tops(ix(k), ix(i));
        for (std::size_t jp = k + 1; jp < j; ++jp) partial += a(ix(jp), ix(k)) * tops(ix(jp), ix(i));
        v = std::min(v, -partial / tops(ix(j), ix(i)));
      }
      a(ix(j), ix(k)) = v;
    }
  }

  // Sign pattern of (h_k)_{d,i}: zero past j_i, negative at j_i, nonnegative before.
  Eigen::MatrixXd h = a.transpose() * tops;  // h(k, i) = sum_j a_jk (g_j)_{d,i}
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ji = star.j_of_i[i];
    const double scale = 1e-12 * (1.0 + tops.col(ix(i)).cwiseAbs().sum() * (1.0 + a.cwiseAbs().maxCoeff()));
    for (std::size_t k = 0; k <= m; ++k) {
      double v = h(ix(k), ix(i));
      bool ok = k > ji ? std::abs(v) <= scale : k == ji ? v < 0 : v >= -scale;
      if (!ok) throw std::logic_error("canonical matrix postcondition failed at x" + std::to_string(i + 1));
    }
  }
  return TransformMatrix(a);
}

TransformMatrix matrix_for_m1(const SemialgebraicProblem& problem) {
  if (problem.m() != 1) throw ProblemError("the single-generator matrix needs exactly one generator");
  auto ft = problem.f.tops(problem.d), gt = problem.g[0].tops(problem.d);
  double c = 0.0;  // clamped at zero: c < 0 would only shrink the reachable multipliers
  for (std::size_t i = 0; i < problem.n(); ++i) {
    double fi = ft[ix(i)], gi = gt[ix(i)];
    if (gi == 0) {
      if (fi <= 0)
        throw ProblemError("single-generator hypothesis fails at x" + std::to_string(i + 1) +
                           ": generator top coefficient is zero and f's is not positive");
      continue;
    }
    double threshold = -fi / gi;
    if (gi > 0) threshold += kStrictMargin;
    c = std::max(c, threshold);
  }
  if (c == 0.0 && index_sets(-problem.g[0], problem.d).delta.empty() && problem.g[0].constant_term() >= 0)
    c = kStrictMargin;
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
  a(1, 0) = -c;
  return TransformMatrix(a);
}

TransformMatrix matrix_for_m2(const SemialgebraicProblem& problem) {
  if (problem.m() != 2) throw ProblemError("the two-generator matrix needs exactly two generators");
  auto ft = problem.f.tops(problem.d);
  if (!ft.isZero(0.0)) throw ProblemError("the two-generator matrix needs every x_i^d coefficient of f to vanish");
  auto g1 = problem.g[0].tops(problem.d), g2 = problem.g[1].tops(problem.d);
  double c = 0.0;
  for (std::size_t i = 0; i < problem.n(); ++i) {
    double a1 = g1[ix(i)], a2 = g2[ix(i)];
    if (a2 == 0) {
      if (a1 >= 0)
        throw ProblemError("two-generator hypothesis fails at x" + std::to_string(i + 1) +
                           ": g2 top coefficient is zero and g1's is not negative");
      continue;
    }
    double threshold = a1 / a2;
    if (a2 > 0) threshold += kStrictMargin;
    c = std::max(c, threshold);
  }
  bool exact = problem.g[0].constant_term() >= 0 && problem.g[1].constant_term() >= 0;
  for (const auto& gj : problem.g) exact = exact && index_sets(-gj, problem.d).delta.empty();
  if (c == 0.0 && exact) c = kStrictMargin;
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  a(2, 1) = -c;
  return TransformMatrix(a);
}

std::vector<Polynomial> transformed_generators(const SemialgebraicProblem& problem, const TransformMatrix& A) {
  const std::size_t m = problem.m();
  if (A.m() != m) throw ProblemError("transform matrix size does not match the number of generators");
  std::vector<Polynomial> gs;
  for (std::size_t j = 0; j <= m; ++j) gs.push_back(problem.generator(j));
  // Sums that cancel to roundoff are set to zero: the canonical matrices are
  // built to cancel top coefficients exactly, and a stray -1e-16 would flip
  // the sign tests downstream.
  constexpr double kCancel = 1e-12;
  std::vector<Polynomial> h;
  for (std::size_t k = 0; k <= m; ++k) {
    std::map<ExponentVector, std::pair<double, double>> acc;  // sum, sum of magnitudes
    for (std::size_t j = 0; j <= m; ++j) {
      if (A(j, k) == 0.0) continue;
      for (const auto& [alpha, c] : gs[j].terms()) {
        auto& [sum, mag] = acc[alpha];
        sum += A(j, k) * c;
        mag += std::abs(A(j, k) * c);
      }
    }
    std::vector<std::pair<ExponentVector, double>> terms;
    for (const auto& [alpha, sm] : acc)
      if (std::abs(sm.first) > kCancel * sm.second) terms.emplace_back(alpha, sm.first);
    h.emplace_back(problem.n(), terms);
  }
  return h;
}

std::vector<ExponentVector> combined_delta(const SemialgebraicProblem& problem) {
  std::set<ExponentVector> all;
  for (std::size_t j = 0; j <= problem.m(); ++j) {
    // Delta(f) for j = 0, Delta(-g_j) otherwise; -generator(j) is exactly that.
    for (auto& a : index_sets(-problem.generator(j), problem.d).delta) all.insert(a);
  }
  return {all.begin(), all.end()};
}

HypothesisCheck check_gp_hypothesis(const SemialgebraicProblem& problem, const TransformMatrix& A) {
  HypothesisCheck out;
  const std::size_t n = problem.n(), m = problem.m();
  if (A.m() != m) {
    out.ok = false;
    out.violation = "transform matrix size does not match the number of generators";
    return out;
  }
  for (std::size_t j = 1; j <= m; ++j) {
    int positive = 0;
    bool nonneg = true;
    for (std::size_t k = 0; k <= m; ++k) {
      positive += A(j, k) > 0;
      nonneg = nonneg && A(j, k) >= 0;
    }
    if (positive != 1 && !nonneg) {
      out.ok = false;
      out.violation = "row " + std::to_string(j) + " of A has " + std::to_string(positive) +
                      " positive entries and a negative one";
      return out;
    }
  }
  auto h = transformed_generators(problem, A);
  auto delta = combined_delta(problem);
  for (std::size_t i = 0; i < n; ++i) {
    int negatives = 0, which = -1;
    bool all_zero = true;
    for (std::size_t k = 0; k <= m; ++k) {
      double t = h[k].top(i, problem.d);
      if (t < 0) {
        ++negatives;
        which = static_cast<int>(k);
      }
      all_zero = all_zero && t == 0;
    }
    bool used = std::any_of(delta.begin(), delta.end(), [&](const ExponentVector& a) { return a[i] > 0; });
    if (negatives == 1) {
      out.j_of_i.push_back(which);
    } else if (negatives == 0 && all_zero && !used) {
      // The constraint for this column is vacuous: no z variable, no mu term.
      out.j_of_i.push_back(-1);
    } else {
      out.ok = false;
      out.violation = "column x" + std::to_string(i + 1) + " has " + std::to_string(negatives) +
                      " negative top coefficients among h_0..h_m";
      return out;
    }
  }
  return out;
}

RelaxationProgram build_relaxation(const SemialgebraicProblem& problem, const TransformMatrix& A) {
  RelaxationProgram out;
  out.hypothesis = check_gp_hypothesis(problem, A);
  if (!out.hypothesis.ok) return out;
  const std::size_t n = problem.n(), m = problem.m();
  const int d = problem.d;
  out.h = transformed_generators(problem, A);
  out.offset = -out.h[0].constant_term();

  Builder b;
  for (std::size_t j = 1; j <= m; ++j) out.mu_var.push_back(b.add_var("mu" + std::to_string(j)));
  auto mu = [&](std::size_t j) { return out.mu_var[j - 1]; };
  // c * mu_j as a monomial (mu_0 = 1).
  auto scaled_mu = [&](double c, std::size_t j) {
    return j == 0 ? gp::Monomial(c, {}) : gp::Monomial(c, {{mu(j), 1.0}});
  };

  for (std::size_t j = 1; j <= m; ++j) {
    double c = out.h[j].constant_term();
    if (c > 0) b.gp.objective.terms.push_back(scaled_mu(c, j));
  }

  std::vector<gp::Posynomial> rows(n);
  for (const auto& alpha : combined_delta(problem)) {
    std::vector<std::size_t> nonzero;
    for (std::size_t j = 0; j <= m; ++j)
      if (out.h[j].coeff(alpha) != 0.0) nonzero.push_back(j);
    if (nonzero.empty()) {
      out.dropped.push_back(alpha);
      continue;
    }

    WIndex w{alpha};
    double log_w = 0.0;
    std::vector<gp::Factor> w_factors;
    if (nonzero.size() == 1) {
      // max{H+, H-} is the single monomial |(h_j)_alpha| mu_j; substitute it.
      std::size_t j = nonzero.front();
      log_w = std::log(std::abs(out.h[j].coeff(alpha)));
      w.log_coefficient = log_w;
      if (j > 0) {
        w.mu_var = mu(j);
        w_factors.push_back({mu(j), 1.0});
      }
    } else {
      w.var = b.add_var("w" + alpha_name(alpha));
      w_factors.push_back({w.var, 1.0});
      gp::Posynomial plus, minus;
      for (std::size_t j : nonzero) {
        double c = out.h[j].coeff(alpha);
        gp::Monomial t = scaled_mu(std::abs(c), j);
        t.factors.push_back({w.var, -1.0});
        (c < 0 ? plus : minus).terms.push_back(std::move(t));
      }
      if (!plus.empty()) b.gp.inequalities.push_back(std::move(plus));
      if (!minus.empty()) b.gp.inequalities.push_back(std::move(minus));
    }
    out.w.push_back(w);

    auto zv = make_z(b, out.z, alpha);
    if (alpha.order() < d)
      b.gp.objective.terms.push_back(objective_term(alpha, d, log_w, w_factors, zv));
    else
      b.gp.inequalities.push_back(gp::Posynomial{{top_degree_term(alpha, d, log_w, w_factors, zv)}});
    for (const auto& [i, v] : zv) rows[i].terms.push_back(gp::Monomial(1.0, {{v, 1.0}}));
  }

  // sum_alpha z_{alpha,i} + sum_{j != j_i} (h_j)_{d,i} mu_j <= -(h_{j_i})_{d,i} mu_{j_i}
  for (std::size_t i = 0; i < n; ++i) {
    int ji = out.hypothesis.j_of_i[i];
    if (ji < 0) continue;
    auto& row = rows[i];
    for (std::size_t j = 0; j <= m; ++j) {
      double t = out.h[j].top(i, d);
      if (static_cast<int>(j) != ji && t > 0) row.terms.push_back(scaled_mu(t, j));
    }
    if (row.empty()) continue;
    const double rhs = -out.h[static_cast<std::size_t>(ji)].top(i, d);
    for (auto& t : row.terms) {
      t.coefficient /= rhs;
      if (ji > 0) t.factors.push_back({mu(static_cast<std::size_t>(ji)), -1.0});
    }
    b.gp.inequalities.push_back(std::move(row));
  }

  // sum_k a_jk mu_k >= 0 when exactly one a_jk is positive.
  for (std::size_t j = 1; j <= m; ++j) {
    std::size_t kj = m + 1;
    int positive = 0;
    for (std::size_t k = 0; k <= m; ++k)
      if (A(j, k) > 0) {
        ++positive;
        kj = k;
      }
    if (positive != 1) continue;  // all nonnegative: empty constraint
    gp::Posynomial row;
    for (std::size_t k = 0; k <= m; ++k) {
      if (A(j, k) >= 0) continue;
      gp::Monomial t = scaled_mu(-A(j, k) / A(j, kj), k);
      if (kj > 0) t.factors.push_back({mu(kj), -1.0});
      row.terms.push_back(std::move(t));
    }
    if (!row.empty()) b.gp.inequalities.push_back(std::move(row));
  }

  if (b.gp.objective.empty()) {
    out.objective_empty = true;
    b.gp.objective.terms.push_back(gp::Monomial(1.0, {}));
  }
  out.gp = std::move(b.gp);
  return out;
}

namespace {

struct ChosenMatrix {
  std::optional<TransformMatrix> A;
  TheoremPath path = TheoremPath::Canonical;
  std::vector<std::string> notes;
};

ChosenMatrix choose_matrix(const SemialgebraicProblem& p, PathChoice choice) {
  ChosenMatrix out;
  auto attempt = [&](TheoremPath path, auto make) {
    out.path = path;  // on failure this names the last path tried
    try {
      TransformMatrix A = make();
      auto chk = check_gp_hypothesis(p, A);
      if (!chk.ok) {
        out.notes.push_back(to_string(path) + ": " + chk.violation);
        return false;
      }
      out.A = std::move(A);
      return true;
    } catch (const ProblemError& e) {
      out.notes.push_back(to_string(path) + ": " + e.what());
      return false;
    }
  };
  auto canonical = [&] { return attempt(TheoremPath::Canonical, [&] { return canonical_matrix(p); }); };
  auto m1 = [&] { return attempt(TheoremPath::SingleGenerator, [&] { return matrix_for_m1(p); }); };
  auto m2 = [&] { return attempt(TheoremPath::TwoGenerators, [&] { return matrix_for_m2(p); }); };
  auto identity = [&] { return attempt(TheoremPath::Identity, [&] { return TransformMatrix::identity(p.m()); }); };

  switch (choice) {
    case PathChoice::Canonical: canonical(); break;
    case PathChoice::SingleGenerator: m1(); break;
    case PathChoice::TwoGenerators: m2(); break;
    case PathChoice::Identity: identity(); break;
    case PathChoice::Auto:
    case PathChoice::Subset:
      if (canonical()) break;
      if (p.m() == 1 && m1()) break;
      if (p.m() == 2 && p.f.tops(p.d).isZero(0.0) && m2()) break;
      identity();
      break;
  }
  return out;
}

BoundResult solve_relaxation(const SemialgebraicProblem& p, const TransformMatrix& A, TheoremPath path,
                             const gp::SolverOptions& options) {
  auto prog = build_relaxation(p, A);
  if (!prog.hypothesis.ok) {
    auto r = no_bound(BoundStatus::NotAGeometricProgram, prog.hypothesis.violation);
    r.path = path;
    r.A = A;
    return r;
  }
  BoundResult r;
  r.path = path;
  r.A = A;
  for (const auto& a : prog.dropped) r.diagnostics.push_back("term " + alpha_name(a) + " cancels in every h_j");
  auto s = solve_and_check(prog.gp, prog.objective_empty, options);
  r.solver_status = s.result.status;
  r.kkt_residual = s.result.kkt_residual;
  r.diagnostics.insert(r.diagnostics.end(), s.diagnostics.begin(), s.diagnostics.end());
  if (!s.feasible) {
    r.status = BoundStatus::Infeasible;
    r.value = kNaN;
    return r;
  }
  const auto& x = s.result.point;
  r.status = BoundStatus::Bound;
  r.value = prog.offset - s.rho;

  const std::size_t m = p.m();
  Eigen::VectorXd mu_full(ix(m + 1));
  mu_full[0] = 1.0;
  for (std::size_t j = 1; j <= m; ++j) mu_full[ix(j)] = x[prog.mu_var[j - 1]];
  r.witness.mu = mu_full.tail(ix(m));
  Eigen::VectorXd lambda = A.matrix() * mu_full;
  r.witness.lambda = lambda.tail(ix(m));
  for (const auto& z : prog.z) r.witness.z.push_back({z.alpha, z.i, x[z.var]});
  for (const auto& w : prog.w) {
    double v = w.var >= 0 ? x[w.var] : std::exp(w.log_coefficient) * (w.mu_var >= 0 ? x[w.mu_var] : 1.0);
    r.witness.w.push_back({w.alpha, v, w.var < 0});
  }
  if (m > 0 && r.witness.lambda.minCoeff() < -1e-9)
    r.diagnostics.push_back("recovered multiplier is negative: " + std::to_string(r.witness.lambda.minCoeff()));
  return r;
}

}  // namespace

BoundResult lower_bound_constrained(const SemialgebraicProblem& problem, PathChoice path,
                                    const gp::SolverOptions& options) {
  auto norm = normalize(problem);
  const auto& p = norm.problem;
  auto with_notes = [&](BoundResult r) {
    r.diagnostics.insert(r.diagnostics.begin(), norm.diagnostics.begin(), norm.diagnostics.end());
    return r;
  };

  if (p.m() == 0 && !p.A) return with_notes(lower_bound_unconstrained(p.f, p.d, options));

  if (p.A) {
    auto r = solve_relaxation(p, *p.A, TheoremPath::UserMatrix, options);
    for (std::size_t j = 0; j < p.m(); ++j) r.generator_subset.push_back(j);
    return with_notes(r);
  }

  auto chosen = choose_matrix(p, path);
  if (!chosen.A && path == PathChoice::Subset) {
    auto sel = select_generator_subset(p);
    if (!sel)
      return with_notes(no_bound(BoundStatus::NotAGeometricProgram, "no subset of generators satisfies (*) or (dagger)"));
    auto sub = restrict_generators(p, sel->indices);
    auto r = sub.m() == 0 ? lower_bound_unconstrained(sub.f, sub.d, options)
                          : lower_bound_constrained(sub, PathChoice::Auto, options);
    r.generator_subset = sel->indices;
    r.diagnostics.insert(r.diagnostics.begin(), "using " + std::to_string(sel->indices.size()) + " of " +
                                                    std::to_string(p.m()) + " generators");
    return with_notes(r);
  }
  if (!chosen.A) {
    BoundResult r = no_bound(BoundStatus::NotAGeometricProgram, "no transform matrix satisfies the GP hypothesis");
    r.path = chosen.path;
    r.diagnostics.insert(r.diagnostics.end(), chosen.notes.begin(), chosen.notes.end());
    return with_notes(r);
  }
  auto r = solve_relaxation(p, *chosen.A, chosen.path, options);
  for (std::size_t j = 0; j < p.m(); ++j) r.generator_subset.push_back(j);
  return with_notes(r);
}

SemialgebraicProblem restrict_generators(const SemialgebraicProblem& problem, const std::vector<std::size_t>& keep) {
  SemialgebraicProblem out;
  out.f = problem.f;
  out.d = problem.d;
  out.box = problem.box;
  for (std::size_t j : keep) out.g.push_back(problem.g.at(j));
  return out;
}

std::optional<SubsetSelection> select_generator_subset(const SemialgebraicProblem& problem) {
  constexpr std::size_t kCap = 8;
  const std::size_t m = problem.m();
  std::vector<std::size_t> pool;
  for (std::size_t j = 0; j < std::min(m, std::size_t{20}); ++j) pool.push_back(j);
  for (std::size_t size = std::min(kCap, pool.size()) + 1; size-- > 0;) {
    // Lexicographic enumeration of size-element subsets.
    std::vector<std::size_t> idx(size);
    for (std::size_t k = 0; k < size; ++k) idx[k] = k;
    while (true) {
      std::vector<std::size_t> chosen;
      for (auto k : idx) chosen.push_back(pool[k]);
      auto sub = restrict_generators(problem, chosen);
      if (condition_star(sub).ok) return SubsetSelection{chosen, true};
      if (condition_dagger(sub)) return SubsetSelection{chosen, false};
      if (size == 0) break;
      std::size_t k = size;
      while (k-- > 0 && idx[k] == pool.size() - size + k) {
      }
      if (k == static_cast<std::size_t>(-1)) break;
      ++idx[k];
      for (std::size_t q = k + 1; q < size; ++q) idx[q] = idx[q - 1] + 1;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

SemialgebraicProblem hyperellipsoid_problem(const Polynomial& f, double M, int d) {
  if (!(M > 0) || !std::isfinite(M)) throw ProblemError("hyperellipsoid radius M must be positive");
  const std::size_t n = f.n();
  Polynomial g = Polynomial::constant(n, M);
  for (std::size_t i = 0; i < n; ++i) g = g - Polynomial::monomial(n, i, d, 1.0);
  SemialgebraicProblem p{f, {g}, d, std::nullopt, std::nullopt};
  p.box = Eigen::VectorXd::Constant(ix(n), std::pow(M, 1.0 / d));
  p.validate();
  return p;
}

SemialgebraicProblem hypercube_problem(const Polynomial& f, const Eigen::VectorXd& N, int d) {
  const std::size_t n = f.n();
  if (static_cast<std::size_t>(N.size()) != n) throw ProblemError("box has the wrong length");
  if ((N.array() <= 0).any() || !N.allFinite()) throw ProblemError("box half-widths must be positive");
  SemialgebraicProblem p{f, {}, d, std::nullopt, N};
  for (std::size_t i = 0; i < n; ++i)
    p.g.push_back(Polynomial::constant(n, std::pow(N[ix(i)], d)) - Polynomial::monomial(n, i, d, 1.0));
  p.validate();
  if (!condition_star(p).ok) throw std::logic_error("hypercube generators violate (*)");
  return p;
}

SemialgebraicProblem partition_problem(const Polynomial& f, const Eigen::VectorXd& N,
                                       const std::vector<std::vector<std::size_t>>& partition, int d) {
  const std::size_t n = f.n();
  if (static_cast<std::size_t>(N.size()) != n) throw ProblemError("scale vector has the wrong length");
  if ((N.array() <= 0).any() || !N.allFinite()) throw ProblemError("scale factors must be positive");
  std::vector<int> seen(n, 0);
  SemialgebraicProblem p{f, {}, d, std::nullopt, N};
  for (const auto& block : partition) {
    if (block.empty()) throw ProblemError("partition blocks must be nonempty");
    Polynomial g = Polynomial::constant(n, 1.0);
    for (std::size_t i : block) {
      if (i >= n) throw ProblemError("partition index out of range");
      if (seen[i]++) throw ProblemError("partition blocks overlap");
      g = g - Polynomial::monomial(n, i, d, std::pow(N[ix(i)], -d));
    }
    p.g.push_back(std::move(g));
  }
  if (std::count(seen.begin(), seen.end(), 1) != static_cast<long>(n))
    throw ProblemError("partition does not cover every variable");
  p.validate();
  if (!condition_star(p).ok) throw std::logic_error("partition generators violate (*)");
  return p;
}

}  // namespace gpbound
