#include "gpbound/cli.hpp"

#include "gpbound/bench.hpp"
#include "gpbound/hypercube.hpp"
#include "gpbound/problem_io.hpp"
#include "gpbound/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <ostream>

namespace gpbound {

int exit_code(BoundStatus status) {
  switch (status) {
    case BoundStatus::Bound: return kExitBound;
    case BoundStatus::NegInfinity: return kExitNegInfinity;
    case BoundStatus::NotAGeometricProgram: return kExitNotGeometric;
    case BoundStatus::Infeasible: return kExitInfeasible;
  }
  return kExitFailure;
}

int log_level() {
  const char* v = std::getenv("GPBOUND_LOG");
  if (!v) return 0;
  const std::string s(v);
  if (s == "debug" || s == "2") return 2;
  if (s == "info" || s == "1") return 1;
  return 0;
}

namespace {

struct Config {
  std::string file;
  std::string path = "file";  // "file": whatever the problem file says
  double tol = 1e-8;
  bool json = false;
  std::vector<double> box;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  BenchParams bench;
};

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

gp::SolverOptions solver_options(const Config& c) {
  gp::SolverOptions o;
  o.tol = c.tol;
  return o;
}

BoundResult solve(const ProblemFile& pf, const Config& c) {
  const auto path = c.path == "file" ? pf.path : parse_path(c.path);
  return lower_bound_constrained(pf.problem, path, solver_options(c));
}

void log_diagnostics(const BoundResult& r, std::ostream& err) {
  if (log_level() < 1) return;
  for (const auto& d : r.diagnostics) err << "gpbound: " << d << '\n';
  if (log_level() >= 2)
    err << "gpbound: solver " << gp::to_string(r.solver_status) << ", kkt residual " << r.kkt_residual << '\n';
}

void print_human(const BoundResult& r, std::ostream& out) {
  out << std::setprecision(6);
  out << "status: " << to_string(r.status) << '\n';
  if (r.status == BoundStatus::Bound) out << "value: " << r.value << '\n';
  if (r.status == BoundStatus::NegInfinity) out << "value: -inf\n";
  out << "path: " << to_string(r.path) << '\n';
  if (r.A) {
    out << "A:\n";
    const auto& a = r.A->matrix();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      out << " ";
      for (Eigen::Index k = 0; k < a.cols(); ++k) out << ' ' << a(i, k);
      out << '\n';
    }
  }
  if (r.status != BoundStatus::Bound && !r.diagnostics.empty()) out << "reason: " << r.diagnostics.back() << '\n';
}

int cmd_bound(const Config& c, std::ostream& out, std::ostream& err) {
  const auto pf = read_problem_file(c.file);
  const auto r = solve(pf, c);
  log_diagnostics(r, err);
  if (c.json)
    out << result_to_json(r).dump(2) << '\n';
  else
    print_human(r, out);
  return exit_code(r.status);
}

int cmd_trivial(const Config& c, std::ostream& out, std::ostream&) {
  const auto pf = read_problem_file(c.file);
  Eigen::VectorXd N;
  if (!c.box.empty())
    N = to_vector(c.box);
  else if (pf.problem.box)
    N = *pf.problem.box;
  else
    throw FormatError("trivial needs --box N1,...,Nn (or a \"box\" in the problem file)");
  if (N.size() != static_cast<Eigen::Index>(pf.problem.n())) throw FormatError("--box needs one value per variable");
  const auto cmp = compare_with_gp(pf.problem.f, N, pf.problem.d, solver_options(c));
  if (c.json) {
    auto j = trivial_to_json(trivial_bound(pf.problem.f, N));
    j["gp"] = result_to_json(cmp.gp);
    j["gap"] = cmp.gp.is_bound() ? nlohmann::json(cmp.gap) : nlohmann::json(nullptr);
    j["equality_clause"] = cmp.equality_clause;
    out << j.dump(2) << '\n';
  } else {
    out << std::setprecision(6) << "f_tr: " << cmp.trivial << '\n';
    if (cmp.gp.is_bound())
      out << "gp bound: " << cmp.gp.value << '\n';
    else
      out << "gp bound: " << to_string(cmp.gp.status) << '\n';
  }
  return kExitBound;
}

int cmd_verify(const Config& c, std::ostream& out, std::ostream& err) {
  const auto pf = read_problem_file(c.file);
  const auto r = solve(pf, c);
  log_diagnostics(r, err);
  if (!r.is_bound()) {
    err << "gpbound: nothing to verify, status " << to_string(r.status) << '\n';
    return exit_code(r.status);
  }
  VerifyOptions vo;
  vo.samples = c.samples;
  vo.seed = c.seed;
  if (!c.box.empty()) vo.box = to_vector(c.box);
  const auto rep = verify_bound(pf.problem, r.value, vo);
  if (!rep.ran) {
    err << "gpbound: " << rep.message << '\n';
    return kExitInput;
  }
  if (c.json) {
    nlohmann::json j = {{"bound", rep.bound},
                        {"min_f", rep.accepted ? nlohmann::json(rep.min_f) : nlohmann::json(nullptr)},
                        {"margin", rep.accepted ? nlohmann::json(rep.margin) : nlohmann::json(nullptr)},
                        {"accepted", rep.accepted},
                        {"attempted", rep.attempted},
                        {"pass", rep.pass},
                        {"message", rep.message}};
    out << j.dump(2) << '\n';
  } else {
    out << std::setprecision(6) << "bound: " << rep.bound << '\n';
    if (rep.accepted) out << "min sampled f: " << rep.min_f << "\nmargin: " << rep.margin << '\n';
    out << "samples: " << rep.accepted << " accepted of " << rep.attempted << '\n'
        << (rep.pass ? "PASS" : "FAIL") << ": " << rep.message << '\n';
  }
  return rep.pass ? kExitBound : kExitFailure;
}

int cmd_bench(const Config& c, std::ostream& out, std::ostream&) {
  const auto& p = c.bench;
  if (p.n == 0 || p.t == 0 || p.d < 2 || p.d % 2 != 0) throw FormatError("bench needs n, t >= 1 and even d >= 2");
  if (p.m > p.n) throw FormatError("bench needs m <= n");
  const auto cell = run_bench(p, solver_options(c));
  if (c.json) {
    nlohmann::json rows = nlohmann::json::array();
    if (!cell.runs.empty()) {
      std::vector<double> values;
      for (const auto& r : cell.runs) values.push_back(r.result.is_bound() ? r.result.value : std::nan(""));
      rows.push_back({{"n", p.n}, {"d", p.d}, {"t", p.t}, {"m", p.m}, {"reps", cell.runs.size()},
                      {"mean_s", cell.mean_seconds}, {"stddev_s", cell.stddev_seconds}, {"bounds", values}});
    }
    out << rows.dump(2) << '\n';
  } else {
    write_bench_csv(out, {cell});
  }
  return kExitBound;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified lower bounds for polynomials via geometric programming", "gpbound"};
  app.require_subcommand(1);
  Config c;

  auto add_solver_flags = [&](CLI::App* sub) {
    sub->add_option("--path", c.path, "auto|canonical|m1|m2|identity|subset (default: from the file, else auto)")
        ->check(CLI::IsMember({"file", "auto", "canonical", "m1", "m2", "identity", "subset"}));
    sub->add_option("--tol", c.tol, "solver tolerance in (0, 1e-2]")->check(CLI::Range(0.0, 1e-2));
    sub->add_flag("--json", c.json, "JSON output");
  };

  auto* bound = app.add_subcommand("bound", "lower bound for f on K_g");
  bound->add_option("file", c.file, "problem JSON")->required();
  add_solver_flags(bound);

  auto* trivial = app.add_subcommand("trivial", "trivial bound on a box, next to the GP bound");
  trivial->add_option("file", c.file, "problem JSON")->required();
  trivial->add_option("--box", c.box, "half-widths N1,...,Nn")->delimiter(',');
  add_solver_flags(trivial);

  auto* verify = app.add_subcommand("verify", "sample K_g and check the bound");
  verify->add_option("file", c.file, "problem JSON")->required();
  verify->add_option("--samples", c.samples, "accepted samples wanted")->check(CLI::PositiveNumber);
  verify->add_option("--box", c.box, "sampling half-widths N1,...,Nn")->delimiter(',');
  verify->add_option("--seed", c.seed, "sampler seed");
  add_solver_flags(verify);

  auto* bench = app.add_subcommand("bench", "random partition problems, timed");
  bench->add_option("--n", c.bench.n, "variables");
  bench->add_option("--d", c.bench.d, "degree bound");
  bench->add_option("--t", c.bench.t, "terms of f");
  bench->add_option("--m", c.bench.m, "partition blocks (0: random per instance)");
  bench->add_option("--reps", c.bench.reps, "instances");
  bench->add_option("--seed", c.bench.seed, "generator seed");
  bench->add_option("--tol", c.tol, "solver tolerance in (0, 1e-2]")->check(CLI::Range(0.0, 1e-2));
  bench->add_flag("--json", c.json, "JSON output");

  // CLI11 wants the arguments reversed and without the program name.
  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
    if (!(c.tol > 0.0)) throw CLI::ValidationError("--tol", "must be positive");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*bound) return cmd_bound(c, out, err);
    if (*trivial) return cmd_trivial(c, out, err);
    if (*verify) return cmd_verify(c, out, err);
    if (*bench) return cmd_bench(c, out, err);
  } catch (const FormatError& e) {
    err << "gpbound: " << e.what() << '\n';
    return kExitInput;
  } catch (const ProblemError& e) {
    err << "gpbound: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "gpbound: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace gpbound
