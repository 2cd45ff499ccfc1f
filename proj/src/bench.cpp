#include "gpbound/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

namespace gpbound {

namespace {

// log C(d + n, n), enough to tell whether t distinct exponents exist.
double log_exponent_count(std::size_t n, int d) {
  return std::lgamma(static_cast<double>(d) + n + 1) - std::lgamma(static_cast<double>(d) + 1) -
         std::lgamma(static_cast<double>(n) + 1);
}

// Stars and bars: an n-subset of {0, .., d+n-1} <-> alpha with |alpha| <= d.
ExponentVector random_exponent(std::size_t n, int d, std::mt19937_64& rng) {
  const std::size_t slots = static_cast<std::size_t>(d) + n;
  // Floyd's algorithm for a uniform n-subset.
  std::set<std::size_t> chosen;
  for (std::size_t j = slots - n; j < slots; ++j) {
    std::uniform_int_distribution<std::size_t> pick(0, j);
    const auto v = pick(rng);
    chosen.insert(chosen.count(v) ? j : v);
  }
  // alpha_1 = b_1, alpha_k = b_k - b_{k-1} - 1; what is left after b_n is slack.
  std::vector<int> alpha;
  alpha.reserve(n);
  long prev = -1;
  for (auto b : chosen) {
    alpha.push_back(static_cast<int>(static_cast<long>(b) - prev - 1));
    prev = static_cast<long>(b);
  }
  return ExponentVector(alpha);
}

}  // namespace

Polynomial random_polynomial(std::size_t n, int d, std::size_t t, std::mt19937_64& rng) {
  if (n == 0 || d < 0) throw std::invalid_argument("random_polynomial: need n >= 1 and d >= 0");
  if (std::log(static_cast<double>(t)) > log_exponent_count(n, d) + 1e-9)
    throw std::invalid_argument("random_polynomial: t exceeds the number of exponents with |alpha| <= d");
  std::uniform_real_distribution<double> coef(-10.0, 10.0);
  std::set<ExponentVector> seen;
  std::vector<std::pair<ExponentVector, double>> terms;
  while (terms.size() < t) {
    auto alpha = random_exponent(n, d, rng);
    if (!seen.insert(alpha).second) continue;
    double c = 0.0;
    while (c == 0.0) c = coef(rng);
    terms.emplace_back(std::move(alpha), c);
  }
  return Polynomial(n, terms);
}

std::vector<std::vector<std::size_t>> random_partition(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  if (m == 0 || m > n) throw std::invalid_argument("random_partition: need 1 <= m <= n");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> cuts(n - 1);
  std::iota(cuts.begin(), cuts.end(), 1);
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(m - 1);
  cuts.push_back(n);
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::vector<std::size_t>> blocks;
  std::size_t start = 0;
  for (auto c : cuts) {
    std::vector<std::size_t> block(order.begin() + static_cast<std::ptrdiff_t>(start),
                                   order.begin() + static_cast<std::ptrdiff_t>(c));
    std::sort(block.begin(), block.end());
    blocks.push_back(std::move(block));
    start = c;
  }
  return blocks;
}

SemialgebraicProblem random_partition_instance(const BenchParams& params, std::mt19937_64& rng) {
  auto f = random_polynomial(params.n, params.d, params.t, rng);
  std::size_t m = params.m;
  if (m == 0) m = std::uniform_int_distribution<std::size_t>(1, params.n)(rng);
  auto blocks = random_partition(params.n, m, rng);
  return partition_problem(f, Eigen::VectorXd::Ones(static_cast<Eigen::Index>(params.n)), blocks, params.d);
}

BenchCell run_bench(const BenchParams& params, const gp::SolverOptions& options) {
  BenchCell cell;
  cell.params = params;
  std::mt19937_64 rng(params.seed);
  for (std::size_t r = 0; r < params.reps; ++r) {
    BenchRun run{random_partition_instance(params, rng), {}, 0.0};
    const auto start = std::chrono::steady_clock::now();
    run.result = lower_bound_constrained(run.problem, PathChoice::Auto, options);
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    cell.runs.push_back(std::move(run));
  }
  if (!cell.runs.empty()) {
    double sum = 0.0;
    for (const auto& r : cell.runs) sum += r.seconds;
    cell.mean_seconds = sum / static_cast<double>(cell.runs.size());
    double ss = 0.0;
    for (const auto& r : cell.runs) ss += (r.seconds - cell.mean_seconds) * (r.seconds - cell.mean_seconds);
    cell.stddev_seconds = cell.runs.size() > 1 ? std::sqrt(ss / static_cast<double>(cell.runs.size() - 1)) : 0.0;
  }
  return cell;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchCell>& cells) {
  out << "n,d,t,m,reps,mean_s,stddev_s,bounds\n";
  for (const auto& c : cells) {
    if (c.runs.empty()) continue;
    std::size_t bounds = 0;
    for (const auto& r : c.runs) bounds += r.result.is_bound();
    out << c.params.n << ',' << c.params.d << ',' << c.params.t << ',' << c.params.m << ',' << c.runs.size() << ','
        << c.mean_seconds << ',' << c.stddev_seconds << ',' << bounds << '\n';
  }
}

}  // namespace gpbound
