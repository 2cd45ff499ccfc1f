#include "gpbound/gp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

namespace gpbound::gp {

Monomial Monomial::from_log(double log_c, std::vector<Factor> f) {
  return Monomial(std::exp(log_c), std::move(f));
}

double Monomial::operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  double log_v = std::log(coefficient);
  for (const auto& fac : factors) log_v += fac.power * std::log(x[fac.var]);
  return std::exp(log_v);
}

Eigen::VectorXd Monomial::exponents(int var_count) const {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(var_count);
  for (const auto& fac : factors) a[fac.var] += fac.power;
  return a;
}

double Posynomial::operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  double s = 0.0;
  for (const auto& t : terms) s += t(x);
  return s;
}

namespace {

void validate_monomial(const Monomial& m, int var_count, const char* where) {
  if (!(m.coefficient > 0.0) || !std::isfinite(m.coefficient))
    throw GPError(std::string("monomial coefficient must be positive and finite in ") + where);
  for (const auto& f : m.factors) {
    if (f.var < 0 || f.var >= var_count) throw GPError(std::string("variable index out of range in ") + where);
    if (!std::isfinite(f.power)) throw GPError(std::string("non-finite exponent in ") + where);
  }
}

}  // namespace

void GeometricProgram::validate() const {
  if (var_count < 0) throw GPError("negative variable count");
  if (objective.empty()) throw GPError("objective posynomial has no terms");
  for (const auto& t : objective.terms) validate_monomial(t, var_count, "objective");
  for (const auto& p : inequalities) {
    if (p.empty()) throw GPError("inequality posynomial has no terms");
    for (const auto& t : p.terms) validate_monomial(t, var_count, "inequality");
  }
  for (const auto& e : equalities) validate_monomial(e, var_count, "equality");
}

std::string GeometricProgram::name(int var) const {
  if (var >= 0 && static_cast<std::size_t>(var) < var_names.size()) return var_names[static_cast<std::size_t>(var)];
  return "x" + std::to_string(var);
}

double LogSumExp::value(const Eigen::Ref<const Eigen::VectorXd>& u) const {
  double hi = -std::numeric_limits<double>::infinity();
  std::vector<double> y(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    double v = offsets[static_cast<Eigen::Index>(k)];
    for (const auto& [i, a] : rows[k]) v += a * u[i];
    y[k] = v;
    hi = std::max(hi, v);
  }
  double s = 0.0;
  for (double v : y) s += std::exp(v - hi);
  return hi + std::log(s);
}

namespace {

std::vector<std::pair<int, double>> merged_row(const Monomial& m) {
  std::map<int, double> acc;
  for (const auto& f : m.factors) acc[f.var] += f.power;
  std::vector<std::pair<int, double>> row;
  for (const auto& [i, a] : acc)
    if (a != 0.0) row.emplace_back(i, a);
  return row;
}

LogSumExp to_lse(const Posynomial& p) {
  LogSumExp f;
  f.offsets.resize(static_cast<Eigen::Index>(p.terms.size()));
  for (std::size_t k = 0; k < p.terms.size(); ++k) {
    f.rows.push_back(merged_row(p.terms[k]));
    f.offsets[static_cast<Eigen::Index>(k)] = std::log(p.terms[k].coefficient);
  }
  return f;
}

}  // namespace

ConvexProgram log_transform(const GeometricProgram& gp) {
  gp.validate();
  ConvexProgram cp;
  cp.dim = gp.var_count;
  cp.objective = to_lse(gp.objective);
  for (const auto& p : gp.inequalities) cp.inequalities.push_back(to_lse(p));
  const auto p = static_cast<Eigen::Index>(gp.equalities.size());
  cp.eq_matrix = Eigen::MatrixXd::Zero(p, gp.var_count);
  cp.eq_rhs = Eigen::VectorXd::Zero(p);
  for (Eigen::Index k = 0; k < p; ++k) {
    const auto& m = gp.equalities[static_cast<std::size_t>(k)];
    for (const auto& f : m.factors) cp.eq_matrix(k, f.var) += f.power;
    cp.eq_rhs[k] = -std::log(m.coefficient);
  }
  return cp;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::MaxIter: return "max_iter";
  }
  return "unknown";
}

namespace {

// A log-sum-exp function with rows re-indexed onto its own support, so
// gradients and rank-one Hessian corrections only touch variables it uses.
struct CompiledLse {
  std::vector<int> support;
  std::vector<std::vector<std::pair<int, double>>> rows;  // local indices
  Eigen::VectorXd offsets;

  explicit CompiledLse(const LogSumExp& f) : offsets(f.offsets) {
    std::map<int, int> local;
    for (const auto& row : f.rows)
      for (const auto& [i, a] : row) local.emplace(i, 0);
    int next = 0;
    for (auto& [i, l] : local) {
      l = next++;
      support.push_back(i);
    }
    for (const auto& row : f.rows) {
      std::vector<std::pair<int, double>> r;
      for (const auto& [i, a] : row) r.emplace_back(local[i], a);
      rows.push_back(std::move(r));
    }
  }

  bool affine() const { return rows.size() == 1; }

  // value, local gradient; softmax weights kept in `weights` for the Hessian.
  double eval(const Eigen::VectorXd& u, Eigen::VectorXd& grad, Eigen::VectorXd& weights) const {
    const auto K = static_cast<Eigen::Index>(rows.size());
    weights.resize(K);
    double hi = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < K; ++k) {
      double v = offsets[k];
      for (const auto& [l, a] : rows[static_cast<std::size_t>(k)]) v += a * u[support[static_cast<std::size_t>(l)]];
      weights[k] = v;
      hi = std::max(hi, v);
    }
    double s = 0.0;
    for (Eigen::Index k = 0; k < K; ++k) {
      weights[k] = std::exp(weights[k] - hi);
      s += weights[k];
    }
    weights /= s;
    grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(support.size()));
    for (Eigen::Index k = 0; k < K; ++k)
      for (const auto& [l, a] : rows[static_cast<std::size_t>(k)]) grad[l] += weights[k] * a;
    return hi + std::log(s);
  }

  double value(const Eigen::VectorXd& u) const {
    double hi = -std::numeric_limits<double>::infinity();
    double buf[64];
    std::vector<double> big;
    double* y = buf;
    if (rows.size() > 64) {
      big.resize(rows.size());
      y = big.data();
    }
    for (std::size_t k = 0; k < rows.size(); ++k) {
      double v = offsets[static_cast<Eigen::Index>(k)];
      for (const auto& [l, a] : rows[k]) v += a * u[support[static_cast<std::size_t>(l)]];
      y[k] = v;
      hi = std::max(hi, v);
    }
    double s = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) s += std::exp(y[k] - hi);
    return hi + std::log(s);
  }

  // H += w * (sum_k p_k a_k a_k^T - g g^T)
  void add_hessian(Eigen::MatrixXd& H, double w, const Eigen::VectorXd& grad, const Eigen::VectorXd& weights) const {
    if (affine()) return;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const double pk = w * weights[static_cast<Eigen::Index>(k)];
      for (const auto& [l1, a1] : rows[k])
        for (const auto& [l2, a2] : rows[k]) H(support[static_cast<std::size_t>(l1)], support[static_cast<std::size_t>(l2)]) += pk * a1 * a2;
    }
    add_outer(H, -w, grad);
  }

  void add_outer(Eigen::MatrixXd& H, double w, const Eigen::VectorXd& g) const {
    for (std::size_t a = 0; a < support.size(); ++a) {
      const double ga = w * g[static_cast<Eigen::Index>(a)];
      if (ga == 0.0) continue;
      for (std::size_t b = 0; b < support.size(); ++b) H(support[a], support[b]) += ga * g[static_cast<Eigen::Index>(b)];
    }
  }

  void scatter(Eigen::VectorXd& dense, double w, const Eigen::VectorXd& g) const {
    for (std::size_t a = 0; a < support.size(); ++a) dense[support[a]] += w * g[static_cast<Eigen::Index>(a)];
  }
};

enum class CenterOutcome { Converged, Stalled, EarlyExit, IterationCap, BelowFloor };

class BarrierSolver {
 public:
  BarrierSolver(const ConvexProgram& cp, const SolverOptions& opt)
      : opt_(opt), dim_(cp.dim), objective_(cp.objective) {
    for (const auto& f : cp.inequalities) cons_.emplace_back(f);
    m_ = static_cast<int>(cons_.size());
    eq_ = cp.eq_matrix;
    eq_rhs_ = cp.eq_rhs;
  }

  GPResult run() {
    GPResult res;
    if (!setup_equalities(res)) return res;

    if (reduced_dim_ == 0) return pinned(res);

    Eigen::VectorXd v = Eigen::VectorXd::Zero(reduced_dim_);
    box_ =opt_.log_box > 0.0 && u0_.lpNorm<Eigen::Infinity>() < 0.5 * opt_.log_box ? opt_.log_box : 0.0;
    if (m_ > 0) {
      const auto u = to_u(v);
      double worst = -std::numeric_limits<double>::infinity();
      for (const auto& c : cons_) worst = std::max(worst, c.value(u));
      if (worst > -opt_.phase1_margin) {
        if (!phase1(v, res)) return res;
      }
    }
    phase2(v, res);
    return res;
  }

 private:
  // The equalities leave no freedom: u0 is the only candidate.
  GPResult pinned(GPResult& res) const {
    res.point = u0_.array().exp();
    res.value = std::exp(objective_.value(u0_));
    res.duals = Eigen::VectorXd::Zero(m_);
    res.kkt_residual = 0.0;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& c : cons_) worst = std::max(worst, c.value(u0_));
    if (worst > opt_.tol) {
      res.status = Status::Infeasible;
      res.message = "the equalities fix every variable at an infeasible point";
    } else {
      res.status = Status::Optimal;
    }
    return res;
  }

  Eigen::VectorXd to_u(const Eigen::VectorXd& v) const {
    if (!has_null_) return v;
    return u0_ + null_ * v;
  }

  bool setup_equalities(GPResult& res) {
    if (eq_.rows() == 0) {
      has_null_ = false;
      reduced_dim_ = dim_;
      u0_ = Eigen::VectorXd::Zero(dim_);
      return true;
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(eq_);
    u0_ = cod.solve(eq_rhs_);
    const double resid = (eq_ * u0_ - eq_rhs_).lpNorm<Eigen::Infinity>();
    if (!(resid <= 1e-9 * (1.0 + eq_rhs_.lpNorm<Eigen::Infinity>()))) {
      res.status = Status::Infeasible;
      res.message = "monomial equalities are inconsistent";
      res.point = Eigen::VectorXd::Ones(dim_);
      return false;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(eq_.transpose());
    const auto rank = qr.rank();
    Eigen::MatrixXd Q = qr.householderQ();
    null_ = Q.rightCols(dim_ - rank);
    reduced_dim_ = static_cast<int>(dim_ - rank);
    has_null_ = true;
    return true;
  }

  // Solve H dx = -g with a diagonal shift when H is singular or indefinite.
  Eigen::VectorXd newton_direction(Eigen::MatrixXd& H, const Eigen::VectorXd& g) const {
    double scale = std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
    double shift = 1e-13 * scale;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Eigen::MatrixXd Hs = H;
      Hs.diagonal().array() += shift;
      Eigen::LLT<Eigen::MatrixXd> llt(Hs);
      if (llt.info() == Eigen::Success) {
        Eigen::VectorXd dx = llt.solve(-g);
        if (dx.allFinite()) return dx;
      }
      shift *= 100.0;
    }
    return -g / scale;
  }

  // -sum log(L - u_i) - sum log(L + u_i) for the log-space box.
  bool box_value(const Eigen::VectorXd& u, double& acc) const {
    if (box_ == 0.0) return true;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double a = box_ - u[i], b = box_ + u[i];
      if (!(a > 0.0 && b > 0.0)) return false;
      acc -= std::log(a) + std::log(b);
    }
    return true;
  }

  void box_derivatives(const Eigen::VectorXd& u, Eigen::VectorXd& gu, Eigen::MatrixXd& Hu) const {
    if (box_ == 0.0) return;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double a = box_ - u[i], b = box_ + u[i];
      gu[i] += 1.0 / a - 1.0 / b;
      Hu(i, i) += 1.0 / (a * a) + 1.0 / (b * b);
    }
  }

  // Phase 2 barrier function t*F0 - sum log(-F_i).
  bool phase2_value(const Eigen::VectorXd& v, double t, double& out, double* f0 = nullptr) const {
    const auto u = to_u(v);
    double acc = 0.0;
    if (!box_value(u, acc)) return false;
    for (const auto& c : cons_) {
      const double fi = c.value(u);
      if (!(fi < 0.0)) return false;
      acc -= std::log(-fi);
    }
    const double obj = objective_.value(u);
    if (!std::isfinite(obj)) return false;
    if (f0) *f0 = obj;
    out = t * obj + acc;
    return std::isfinite(out);
  }

  void phase2_derivatives(const Eigen::VectorXd& v, double t, Eigen::VectorXd& g, Eigen::MatrixXd& H) {
    const auto u = to_u(v);
    Eigen::VectorXd gu = Eigen::VectorXd::Zero(dim_);
    Eigen::MatrixXd Hu = Eigen::MatrixXd::Zero(dim_, dim_);
    Eigen::VectorXd lg, w;
    objective_.eval(u, lg, w);
    objective_.scatter(gu, t, lg);
    objective_.add_hessian(Hu, t, lg, w);
    for (const auto& c : cons_) {
      const double fi = c.eval(u, lg, w);
      const double r = -fi;
      c.scatter(gu, 1.0 / r, lg);
      c.add_hessian(Hu, 1.0 / r, lg, w);
      c.add_outer(Hu, 1.0 / (r * r), lg);
    }
    box_derivatives(u, gu, Hu);
    reduce(gu, Hu, g, H);
  }

  void reduce(const Eigen::VectorXd& gu, const Eigen::MatrixXd& Hu, Eigen::VectorXd& g, Eigen::MatrixXd& H) const {
    if (!has_null_) {
      g = gu;
      H = Hu;
    } else {
      g = null_.transpose() * gu;
      H = null_.transpose() * Hu * null_;
    }
  }

  // Phase 1 in y = (v, s): t*s - sum log(s - F_i).
  bool phase1_value(const Eigen::VectorXd& y, double t, double& out) const {
    const auto v = y.head(reduced_dim_);
    const double s = y[reduced_dim_];
    const auto u = to_u(v);
    double acc = t * s;
    if (!box_value(u, acc)) return false;
    for (const auto& c : cons_) {
      const double r = s - c.value(u);
      if (!(r > 0.0)) return false;
      acc -= std::log(r);
    }
    out = acc;
    return std::isfinite(out);
  }

  void phase1_derivatives(const Eigen::VectorXd& y, double t, Eigen::VectorXd& g, Eigen::MatrixXd& H) {
    const Eigen::VectorXd v = y.head(reduced_dim_);
    const double s = y[reduced_dim_];
    const auto u = to_u(v);
    Eigen::VectorXd gu = Eigen::VectorXd::Zero(dim_);
    Eigen::VectorXd gus = Eigen::VectorXd::Zero(dim_);  // d2/du ds
    Eigen::MatrixXd Hu = Eigen::MatrixXd::Zero(dim_, dim_);
    double gs = t, hss = 0.0;
    Eigen::VectorXd lg, w;
    for (const auto& c : cons_) {
      const double fi = c.eval(u, lg, w);
      const double r = s - fi;
      c.scatter(gu, 1.0 / r, lg);
      c.add_hessian(Hu, 1.0 / r, lg, w);
      c.add_outer(Hu, 1.0 / (r * r), lg);
      c.scatter(gus, -1.0 / (r * r), lg);
      gs -= 1.0 / r;
      hss += 1.0 / (r * r);
    }
    box_derivatives(u, gu, Hu);
    Eigen::VectorXd gv;
    Eigen::MatrixXd Hv;
    reduce(gu, Hu, gv, Hv);
    const Eigen::VectorXd hvs = has_null_ ? Eigen::VectorXd(null_.transpose() * gus) : gus;
    const Eigen::Index k = reduced_dim_;
    g.resize(k + 1);
    g.head(k) = gv;
    g[k] = gs;
    H.resize(k + 1, k + 1);
    H.topLeftCorner(k, k) = Hv;
    H.col(k).head(k) = hvs;
    H.row(k).head(k) = hvs.transpose();
    H(k, k) = hss;
  }

  double max_constraint(const Eigen::VectorXd& v) const {
    const auto u = to_u(v);
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& c : cons_) worst = std::max(worst, c.value(u));
    return worst;
  }

  template <class Value, class Derivs, class Exit>
  CenterOutcome center(Eigen::VectorXd& y, double t, Value value, Derivs derivs, Exit early_exit) {
    // Newton decrement target; below kPureNewton full steps are taken
    // without the Armijo test, which cannot resolve such small decreases.
    constexpr double kDecrement = 1e-20;
    constexpr double kPureNewton = 1e-4;
    constexpr double kMaxStep = 10.0;
    double previous = std::numeric_limits<double>::infinity();
    Eigen::VectorXd g;
    Eigen::MatrixXd H;
    double phi = 0.0;
    if (!value(y, t, phi)) return CenterOutcome::Stalled;
    for (int it = 0; it < 200; ++it) {
      if (steps_ >= opt_.max_newton) return CenterOutcome::IterationCap;
      derivs(y, t, g, H);
      Eigen::VectorXd dy = newton_direction(H, g);
      double slope = g.dot(dy);
      if (!(slope < 0.0)) {
        dy = -g;
        slope = -g.squaredNorm();
      }
      const double decrement = -slope / 2.0;
      if (decrement <= kDecrement) return CenterOutcome::Converged;
      if (decrement < kPureNewton && decrement > 0.25 * previous) return CenterOutcome::Converged;
      previous = decrement;
      const double big = dy.lpNorm<Eigen::Infinity>();
      if (big > kMaxStep) {
        dy *= kMaxStep / big;
        slope *= kMaxStep / big;
      }
      double step = 1.0, trial = 0.0;
      Eigen::VectorXd next;
      bool accepted = false;
      const bool pure = decrement < kPureNewton && big <= kMaxStep;
      while (step > 1e-14) {
        next = y + step * dy;
        if (value(next, t, trial) && (pure || trial <= phi + opt_.armijo_slope * step * slope)) {
          accepted = true;
          break;
        }
        step *= opt_.backtrack;
      }
      if (!accepted) return CenterOutcome::Stalled;
      y = next;
      phi = trial;
      ++steps_;
      auto ex = early_exit(y);
      if (ex) return *ex;
    }
    return CenterOutcome::Converged;
  }

  bool phase1(Eigen::VectorXd& v, GPResult& res) {
    Eigen::VectorXd y(reduced_dim_ + 1);
    y.head(reduced_dim_) = v;
    y[reduced_dim_] = max_constraint(v) + 1.0;
    double t = 1.0;
    auto value = [this](const Eigen::VectorXd& yy, double tt, double& out) { return phase1_value(yy, tt, out); };
    auto derivs = [this](const Eigen::VectorXd& yy, double tt, Eigen::VectorXd& g, Eigen::MatrixXd& H) {
      phase1_derivatives(yy, tt, g, H);
    };
    auto exit = [this](const Eigen::VectorXd& yy) -> std::optional<CenterOutcome> {
      if (max_constraint(yy.head(reduced_dim_)) <= -opt_.phase1_margin) return CenterOutcome::EarlyExit;
      return std::nullopt;
    };
    while (true) {
      auto outcome = center(y, t, value, derivs, exit);
      const Eigen::VectorXd vv = y.head(reduced_dim_);
      const double worst = max_constraint(vv);
      if (outcome == CenterOutcome::EarlyExit || worst <= -opt_.phase1_margin) {
        v = vv;
        return true;
      }
      if (outcome == CenterOutcome::IterationCap) {
        res.status = Status::MaxIter;
        res.message = "iteration cap reached in phase 1";
        res.point = to_u(vv).array().exp();
        res.newton_steps = steps_;
        return false;
      }
      const double gap = static_cast<double>(m_) / t;
      if (worst - gap > 0.0 || gap < 1e-12 || outcome == CenterOutcome::Stalled) {
        if (worst < -1e-10) {
          v = vv;
          return true;
        }
        res.status = Status::Infeasible;
        res.message = "no strictly feasible point found";
        res.point = to_u(vv).array().exp();
        res.newton_steps = steps_;
        return false;
      }
      t *= opt_.mu_factor;
    }
  }

  void phase2(Eigen::VectorXd& v, GPResult& res) {
    double t = 1.0 / opt_.mu_initial;
    const double mu_stop = opt_.tol / 10.0;
    bool below_floor = false;
    auto value = [this](const Eigen::VectorXd& vv, double tt, double& out) { return phase2_value(vv, tt, out); };
    auto derivs = [this](const Eigen::VectorXd& vv, double tt, Eigen::VectorXd& g, Eigen::MatrixXd& H) {
      phase2_derivatives(vv, tt, g, H);
    };
    auto exit = [this, &below_floor](const Eigen::VectorXd& vv) -> std::optional<CenterOutcome> {
      if (objective_.value(to_u(vv)) < opt_.log_floor) {
        below_floor = true;
        return CenterOutcome::BelowFloor;
      }
      return std::nullopt;
    };
    // box sides are barrier terms too
    const int barriers = m_ + (box_ > 0.0 ? 2 * dim_ : 0);
    CenterOutcome outcome = CenterOutcome::Converged;
    int extra = 0;
    double kkt = 0.0;
    while (true) {
      outcome = center(v, t, value, derivs, exit);
      if (outcome == CenterOutcome::BelowFloor || outcome == CenterOutcome::IterationCap) break;
      const double mu = 1.0 / t;
      if (barriers == 0 || (mu <= mu_stop && barriers * mu <= opt_.tol)) {
        kkt = kkt_residual(v, t, res.duals);
        if (kkt <= opt_.tol || barriers == 0 || ++extra > 3) break;
      }
      t *= opt_.mu_factor;
    }

    const auto u = to_u(v);
    res.point = u.array().exp();
    res.value = std::exp(objective_.value(u));
    res.newton_steps = steps_;
    res.kkt_residual = kkt_residual(v, t, res.duals);

    if (below_floor) {
      res.status = Status::Unbounded;
      res.message = "objective fell below the floor";
    } else if (outcome == CenterOutcome::IterationCap) {
      res.status = Status::MaxIter;
      res.message = "iteration cap reached";
    } else if (res.kkt_residual > opt_.tol) {
      res.status = Status::MaxIter;
      res.message = "KKT residual above tolerance";
    } else {
      res.status = Status::Optimal;
    }
    if (!below_floor && at_box(v))
      res.message += std::string(res.message.empty() ? "" : "; ") + "some variables reached the log-space box";
  }

  // max of the reduced Lagrangian gradient (duals from the barrier) and the
  // duality gap m/t.
  //
  // Near the end the barrier gradient is only accurate to roundoff times t in
  // the stiff directions spanned by the active constraint gradients, so the
  // barrier duals are refined by least squares over the near-active set;
  // the better of the two estimates is reported.
  double kkt_residual(const Eigen::VectorXd& v, double t, Eigen::VectorXd& duals) const {
    const auto u = to_u(v);
    // Columns: the m inequalities, then the box sides u_i <= L and -u_i <= L.
    const int boxes = box_ > 0.0 ? 2 * dim_ : 0;
    const int total = m_ + boxes;
    Eigen::VectorXd g0 = Eigen::VectorXd::Zero(dim_);
    Eigen::VectorXd lg, w;
    objective_.eval(u, lg, w);
    objective_.scatter(g0, 1.0, lg);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(dim_, total);
    Eigen::VectorXd slack(total);
    for (int i = 0; i < m_; ++i) {
      const auto& c = cons_[static_cast<std::size_t>(i)];
      slack[i] = -c.eval(u, lg, w);
      Eigen::VectorXd col = Eigen::VectorXd::Zero(dim_);
      c.scatter(col, 1.0, lg);
      J.col(i) = col;
    }
    for (int i = 0; i < boxes / 2; ++i) {
      slack[m_ + 2 * i] = box_ - u[i];
      J(i, m_ + 2 * i) = 1.0;
      slack[m_ + 2 * i + 1] = box_ + u[i];
      J(i, m_ + 2 * i + 1) = -1.0;
    }
    Eigen::VectorXd lam = (t * slack.array()).inverse().matrix();
    auto reduce_vec = [this](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return has_null_ ? Eigen::VectorXd(null_.transpose() * x) : x;
    };
    auto measure = [&](const Eigen::VectorXd& l) {
      const Eigen::VectorXd r = reduce_vec(g0 + J * l);
      const double stat = r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0;
      return std::max(stat, l.dot(slack));
    };
    double best = std::max(measure(lam), static_cast<double>(total) / t);
    Eigen::VectorXd best_lam = lam;

    std::vector<int> active;
    for (int i = 0; i < total; ++i)
      if (slack[i] <= 1e-3) active.push_back(i);
    Eigen::VectorXd refined = Eigen::VectorXd::Zero(total);
    for (int i : active) refined[i] = lam[i];
    if (!active.empty() && reduced_dim_ > 0) {
      Eigen::MatrixXd Ja(reduced_dim_, static_cast<Eigen::Index>(active.size()));
      for (std::size_t k = 0; k < active.size(); ++k) Ja.col(static_cast<Eigen::Index>(k)) = reduce_vec(J.col(active[k]));
      const Eigen::VectorXd r = reduce_vec(g0 + J * refined);
      const Eigen::VectorXd delta = Ja.completeOrthogonalDecomposition().solve(-r);
      for (std::size_t k = 0; k < active.size(); ++k)
        refined[active[k]] = std::max(0.0, refined[active[k]] + delta[static_cast<Eigen::Index>(k)]);
    }
    if (refined.allFinite()) {
      const double polished = measure(refined);
      if (polished < best) {
        best = polished;
        best_lam = refined;
      }
    }
    duals = best_lam.head(m_);
    return best;
  }

  bool at_box(const Eigen::VectorXd& v) const {
    return box_ > 0.0 && to_u(v).lpNorm<Eigen::Infinity>() > box_ - 1.0;
  }

  SolverOptions opt_;
  int dim_ = 0;
  int m_ = 0;
  CompiledLse objective_;
  std::vector<CompiledLse> cons_;
  Eigen::MatrixXd eq_;
  Eigen::VectorXd eq_rhs_;
  Eigen::VectorXd u0_;
  Eigen::MatrixXd null_;
  bool has_null_ = false;
  double box_ = 0.0;
  int reduced_dim_ = 0;
  int steps_ = 0;
};

}  // namespace

GPResult solve(const GeometricProgram& gp, const SolverOptions& options) {
  if (!(options.tol > 0.0 && options.tol <= 1e-2)) throw GPError("tolerance must lie in (0, 1e-2]");
  const ConvexProgram cp = log_transform(gp);
  BarrierSolver solver(cp, options);
  return solver.run();
}

FeasibilityReport check_feasible(const GeometricProgram& gp, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != gp.var_count) throw GPError("point has wrong dimension");
  if ((x.array() <= 0.0).any()) throw GPError("point must be strictly positive");
  FeasibilityReport r;
  r.max_inequality_violation = gp.inequalities.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
  for (const auto& p : gp.inequalities) r.max_inequality_violation = std::max(r.max_inequality_violation, p(x) - 1.0);
  for (const auto& e : gp.equalities) r.max_equality_log_residual = std::max(r.max_equality_log_residual, std::abs(std::log(e(x))));
  r.objective = gp.objective(x);
  return r;
}

namespace {

void dump_monomial(std::ostringstream& os, const GeometricProgram& gp, const Monomial& m) {
  os.precision(17);
  os << "{\"c\":" << m.coefficient << ",\"exp\":{";
  bool first = true;
  for (const auto& f : m.factors) {
    os << (first ? "" : ",") << "\"" << gp.name(f.var) << "\":" << f.power;
    first = false;
  }
  os << "}}";
}

void dump_posynomial(std::ostringstream& os, const GeometricProgram& gp, const Posynomial& p) {
  os << "[";
  for (std::size_t k = 0; k < p.terms.size(); ++k) {
    if (k) os << ",";
    dump_monomial(os, gp, p.terms[k]);
  }
  os << "]";
}

}  // namespace

std::string dump_json(const GeometricProgram& gp) {
  std::ostringstream os;
  os << "{\"var_count\":" << gp.var_count << ",\"vars\":[";
  for (int i = 0; i < gp.var_count; ++i) os << (i ? "," : "") << "\"" << gp.name(i) << "\"";
  os << "],\"objective\":";
  dump_posynomial(os, gp, gp.objective);
  os << ",\"inequalities\":[";
  for (std::size_t k = 0; k < gp.inequalities.size(); ++k) {
    if (k) os << ",";
    dump_posynomial(os, gp, gp.inequalities[k]);
  }
  os << "],\"equalities\":[";
  for (std::size_t k = 0; k < gp.equalities.size(); ++k) {
    if (k) os << ",";
    dump_monomial(os, gp, gp.equalities[k]);
  }
  os << "]}";
  return os.str();
}

}  // namespace gpbound::gp
