#ifndef GPBOUND_BENCH_HPP
#define GPBOUND_BENCH_HPP

#include "gpbound/bounds.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

namespace gpbound {

struct BenchParams {
  std::size_t n = 10;
  int d = 20;
  std::size_t t = 50;
  std::size_t m = 0;  // partition blocks; 0 draws m uniformly from 1..n per instance
  std::size_t reps = 10;
  std::uint64_t seed = 1;
};

/// t distinct exponents uniform over {alpha : |alpha| <= d}, coefficients
/// uniform in [-10, 10]. Throws std::invalid_argument when t exceeds the
/// number of available exponents.
Polynomial random_polynomial(std::size_t n, int d, std::size_t t, std::mt19937_64& rng);

/// m nonempty disjoint blocks covering {0..n-1}.
std::vector<std::vector<std::size_t>> random_partition(std::size_t n, std::size_t m, std::mt19937_64& rng);

/// f plus g_j = 1 - sum_{i in I_j} x_i^d.
SemialgebraicProblem random_partition_instance(const BenchParams& params, std::mt19937_64& rng);

struct BenchRun {
  SemialgebraicProblem problem;
  BoundResult result;
  double seconds = 0.0;
};

struct BenchCell {
  BenchParams params;
  std::vector<BenchRun> runs;
  double mean_seconds = 0.0;
  double stddev_seconds = 0.0;
};

BenchCell run_bench(const BenchParams& params, const gp::SolverOptions& options = {});

/// Header plus one row per cell with runs; a cell with reps = 0 prints no row.
void write_bench_csv(std::ostream& out, const std::vector<BenchCell>& cells);

}  // namespace gpbound

#endif  // GPBOUND_BENCH_HPP
