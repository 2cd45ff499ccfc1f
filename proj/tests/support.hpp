// Shared fixtures for the test binaries: reference instances, random
// generators, a brute-force GP oracle and the sampling audit.
#ifndef GPBOUND_TESTS_SUPPORT_HPP
#define GPBOUND_TESTS_SUPPORT_HPP

#include "gpbound/bounds.hpp"
#include "gpbound/verify.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace support {

using namespace gpbound;

inline Polynomial poly(const std::string& s, std::size_t n) { return parse_polynomial(s, n); }

inline SemialgebraicProblem make_problem(std::size_t n, int d, const std::string& f, const std::vector<std::string>& g,
                                         double box) {
  SemialgebraicProblem p;
  p.f = poly(f, n);
  for (const auto& gj : g) p.g.push_back(poly(gj, n));
  p.d = d;
  p.box = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), box);
  return p;
}

struct Instance {
  std::string name;
  SemialgebraicProblem problem;
  PathChoice path = PathChoice::Auto;
  double expected = 0.0;
  double tol = 1e-2;
  bool attainable = true;  // false: the published value contradicts the true minimum
};

// The published worked instances. The sampling box only has to lie inside the
// ambient space; where K_g is unbounded it just limits where the audit looks.
inline std::vector<Instance> reference_instances() {
  std::vector<Instance> out;
  auto add = [&](std::string name, SemialgebraicProblem p, PathChoice path, double expected, double tol,
                 bool attainable = true) {
    out.push_back({std::move(name), std::move(p), path, expected, tol, attainable});
  };
  add("cubic on quartic ball with -xy", make_problem(2, 4, "5*x1 + 6*x2 + x1^3 - x2^2", {"8 - x1*x2 - x1^4 - x2^4"}, 3),
      PathChoice::Auto, -22.334, 1e-2);
  add("cubic+2xy on quartic ball with +x^2y^2",
      make_problem(2, 4, "5*x1 + 6*x2 + x1^3 - x2^2 + 2*x1*x2", {"8 - x1^4 - x2^4 + x1^2*x2^2"}, 3), PathChoice::Auto,
      -31.815, 1e-2);
  add("cubic+2xy on quartic ball with +xy+x^2y^2",
      make_problem(2, 4, "5*x1 + 6*x2 + x1^3 - x2^2 + 2*x1*x2", {"8 + x1*x2 - x1^4 - x2^4 + x1^2*x2^2"}, 3),
      PathChoice::Auto, -31.815, 1e-2);
  add("quartic in three variables, no constraints",
      make_problem(3, 4, "x1^4 + x2^4 + x3^4 - x2^3 + x1*x2", {}, 2), PathChoice::Auto, -0.485, 1e-2);
  add("quartic in three variables, identity matrix",
      make_problem(3, 4, "x1^4 + x2^4 + x3^4 - x2^3 + x1*x2",
                   {"10*x1^3*x3 + x1*x2*x3^2 + x3^2 - 1", "x3^4 - x1^2*x2*x3"}, 2),
      PathChoice::Identity, -0.485, 1e-2);
  add("x+y on two quartic generators",
      make_problem(2, 4, "x1 + x2", {"1 - 2*x2 + 6*x1^2 - x1^4", "-x1^3 - x2^4"}, 3), PathChoice::Auto, -4.64574, 1e-3);
  add("7y-2x^3 on two quartic generators",
      make_problem(2, 4, "7*x2 - 2*x1^3", {"x2 + 8*x2^2 + 2*x1*x2^2 - x1^4", "-x1^2*x2 - x2^4"}, 4), PathChoice::Auto,
      -88.3437, 1e-3, false);
  add("sextic, single generator",
      make_problem(3, 6, "x1 + x3^3 + x2^6 + x3^6", {"1 - x1^6 + x2^6"}, 2), PathChoice::Auto, -1.25, 1e-2);
  add("sextic with x^6, single generator, c = 1",
      make_problem(3, 6, "x1 + x3^3 + x1^6 + x2^6 + x3^6", {"1 - x1^6 + x2^6"}, 2), PathChoice::SingleGenerator, -1.25,
      1e-2, false);
  const std::vector<std::string> g8 = {"x2 - x1^4*x2 + x2^5 - x1^6 - x2^6", "x2 - 5*x1^2 + x1^4*x2 - x1^6 - x2^6"};
  add("sextic pair, canonical matrix", make_problem(2, 6, "-x2 - 2*x1^2", g8, 2), PathChoice::Canonical, -3.593, 1e-2);
  {
    auto p = make_problem(2, 6, "-x2 - 2*x1^2", g8, 2);
    Eigen::Matrix3d a;
    a << 1, 0, 0, 0, 1, 1, 0, -1, 1;
    p.A = TransformMatrix(a);
    add("sextic pair, supplied matrix", std::move(p), PathChoice::Auto, -2.652, 1e-2);
  }
  return out;
}

// Linear objective on a cylinder, a capped sphere and a two-quadric region.
inline SemialgebraicProblem linear_on_cylinder(double p, double q, double r, double s) {
  SemialgebraicProblem out;
  out.f = Polynomial(3, {{ExponentVector{0, 0, 0}, p}, {ExponentVector{1, 0, 0}, q}, {ExponentVector{0, 1, 0}, r},
                         {ExponentVector{0, 0, 1}, s}});
  out.g = {poly("1 - x1^2 - x2^2", 3), poly("1 - x3^2", 3)};
  out.d = 2;
  out.box = Eigen::Vector3d::Ones();
  return out;
}
inline double linear_on_cylinder_min(double p, double q, double r, double s) {
  return p - std::hypot(q, r) - std::abs(s);
}

inline SemialgebraicProblem linear_on_capped_sphere(double p, double q, double r, double s) {
  auto out = linear_on_cylinder(p, q, r, s);
  out.g = {poly("2 - x1^2 - x2^2 - x3^2", 3), poly("1 - x3^2", 3)};
  out.box = Eigen::Vector3d::Constant(std::sqrt(2.0));
  return out;
}
inline double linear_on_capped_sphere_min(double p, double q, double r, double s) {
  const double qr2 = q * q + r * r;
  return s * s >= qr2 ? p - std::sqrt(qr2) - std::abs(s) : p - std::sqrt(2.0) * std::sqrt(qr2 + s * s);
}

inline SemialgebraicProblem linear_on_quadrics(double p, double q, double r) {
  SemialgebraicProblem out;
  out.f = Polynomial(2, {{ExponentVector{0, 0}, p}, {ExponentVector{1, 0}, q}, {ExponentVector{0, 1}, r}});
  out.g = {poly("1 - 2*x1^2 + x2^2", 2), poly("1 + x1^2 - x2^2", 2)};
  out.d = 2;
  out.box = Eigen::Vector2d(std::sqrt(2.0), std::sqrt(3.0));
  return out;
}
inline double linear_on_quadrics_min(double p, double q, double r) {
  return p - std::abs(q) * std::sqrt(2.0) - std::abs(r) * std::sqrt(3.0);
}

// t random terms with |alpha| <= d (not necessarily distinct exponents; repeats add up).
inline Polynomial random_poly(std::size_t n, int d, std::size_t t, std::mt19937_64& rng, double range = 10.0) {
  std::uniform_int_distribution<int> deg(0, d);
  std::uniform_real_distribution<double> coef(-range, range);
  std::uniform_int_distribution<std::size_t> slot(0, n - 1);
  std::vector<std::pair<ExponentVector, double>> terms;
  for (std::size_t k = 0; k < t; ++k) {
    std::vector<int> a(n, 0);
    for (int e = deg(rng); e > 0; --e) ++a[slot(rng)];
    terms.emplace_back(ExponentVector(a), coef(rng));
  }
  return Polynomial(n, terms);
}

// Forces every top coefficient f_{d,i} to be <= 0.
inline Polynomial with_nonpositive_tops(const Polynomial& f, int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 5.0);
  std::vector<std::pair<ExponentVector, double>> terms;
  for (const auto& [a, c] : f.terms())
    if (!a.is_corner(d)) terms.emplace_back(a, c);
  for (std::size_t i = 0; i < f.n(); ++i)
    if (rng() % 2) terms.emplace_back(ExponentVector::corner(f.n(), i, d), -u(rng));
  return Polynomial(f.n(), terms);
}

// Random GP in three variables kept inside e^{-3} <= x_i <= e^3. Constraints
// hold at x = 1 with room, so tightening by 1.1 stays feasible.
inline gp::GeometricProgram random_small_gp(std::mt19937_64& rng, int vars = 3) {
  std::uniform_real_distribution<double> coef(0.5, 2.0);
  std::uniform_real_distribution<double> expo(-2.0, 2.0);
  std::uniform_int_distribution<int> count(1, 3);
  auto monomial = [&](double c) {
    gp::Monomial m;
    m.coefficient = c;
    for (int v = 0; v < vars; ++v)
      if (rng() % 3) m.factors.push_back({v, expo(rng)});
    return m;
  };
  gp::GeometricProgram out;
  out.var_count = vars;
  for (int k = count(rng) + 1; k > 0; --k) out.objective.terms.push_back(monomial(coef(rng)));
  for (int c = count(rng); c > 0; --c) {
    gp::Posynomial p;
    const int terms = count(rng);
    double total = 0.0;
    for (int k = 0; k < terms; ++k) {
      p.terms.push_back(monomial(coef(rng)));
      total += p.terms.back().coefficient;
    }
    for (auto& t : p.terms) t.coefficient *= 0.8 / total;
    out.inequalities.push_back(p);
  }
  for (int v = 0; v < vars; ++v) {
    out.inequalities.push_back({{gp::Monomial(std::exp(-3.0), {{v, 1.0}})}});
    out.inequalities.push_back({{gp::Monomial(std::exp(-3.0), {{v, -1.0}})}});
  }
  return out;
}

// Brute-force minimum over log-space grids in [-L, L]^3: a coarse pass, then
// two finer passes around the best few points. Only inequality GPs.
struct GridMinimum {
  bool feasible = false;
  double value = std::numeric_limits<double>::infinity();
};

inline GridMinimum grid_minimum(const gp::GeometricProgram& prog, double half_width = 3.0) {
  const int n = prog.var_count;
  auto value_at = [&](const Eigen::VectorXd& u, double& out) {
    Eigen::VectorXd x = u.array().exp();
    for (const auto& c : prog.inequalities)
      if (c(x) > 1.0) return false;
    out = prog.objective(x);
    return true;
  };
  struct Pt {
    double v;
    Eigen::VectorXd u;
  };
  auto scan = [&](const Eigen::VectorXd& center, double radius, double step, std::vector<Pt>& best, std::size_t keep) {
    const int k = static_cast<int>(std::lround(radius / step));
    const int side = 2 * k + 1;
    long total = 1;
    for (int i = 0; i < n; ++i) total *= side;
    Eigen::VectorXd u(n);
    for (long idx = 0; idx < total; ++idx) {
      long r = idx;
      for (int i = 0; i < n; ++i) {
        u(i) = center(i) + step * static_cast<double>(r % side - k);
        r /= side;
      }
      double v;
      if (!value_at(u, v)) continue;
      if (best.size() < keep || v < best.back().v) {
        best.push_back({v, u});
        std::sort(best.begin(), best.end(), [](const Pt& a, const Pt& b) { return a.v < b.v; });
        if (best.size() > keep) best.pop_back();
      }
    }
  };
  std::vector<Pt> coarse;
  scan(Eigen::VectorXd::Zero(n), half_width, 0.1, coarse, 5);
  GridMinimum out;
  if (coarse.empty()) return out;
  out.feasible = true;
  for (const auto& c : coarse) {
    std::vector<Pt> mid;
    scan(c.u, 0.2, 0.01, mid, 1);
    std::vector<Pt> fine;
    scan(mid.front().u, 0.02, 0.001, fine, 1);
    out.value = std::min(out.value, fine.front().v);
  }
  return out;
}

// The sampling audit every produced bound goes through.
inline VerifyReport audit(const SemialgebraicProblem& p, const BoundResult& r, std::size_t samples = 1000,
                          std::uint64_t seed = 17) {
  VerifyOptions o;
  o.samples = samples;
  o.seed = seed;
  return verify_bound(p, r.value, o);
}

}  // namespace support

#endif  // GPBOUND_TESTS_SUPPORT_HPP
