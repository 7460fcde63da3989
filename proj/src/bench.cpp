#include "spanlin/bench.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

#include "spanlin/random_trees.hpp"

namespace spanlin {

namespace {

Linearization bench_input(int n, BenchShape shape, std::mt19937_64& rng) {
  switch (shape) {
    case BenchShape::random_split:
      return linearize(random_skeleton(n, rng));
    case BenchShape::left_chain:
      return Linearization(n, 0);
    case BenchShape::right_chain: {
      // w1 (w2 (... wn)): d = (0, 1, ..., n-2, 0).
      Linearization d(n, 0);
      for (int i = 2; i < n; ++i) d[i - 1] = i - 1;
      return d;
    }
  }
  throw std::logic_error("bench_input: unknown shape");
}

}  // namespace

BenchShape bench_shape_from_string(const std::string& name) {
  if (name == "random") return BenchShape::random_split;
  if (name == "left-chain") return BenchShape::left_chain;
  if (name == "right-chain") return BenchShape::right_chain;
  throw std::invalid_argument("unknown bench shape: " + name);
}

BenchResult run_reconstruction_bench(const std::vector<int>& sizes, int trials,
                                     BenchShape shape, SplitRule rule,
                                     std::uint64_t seed) {
  if (sizes.empty()) {
    throw std::invalid_argument("run_reconstruction_bench: no sizes");
  }
  if (trials < 1) {
    throw std::invalid_argument("run_reconstruction_bench: trials < 1");
  }
  std::mt19937_64 rng(seed);
  BenchResult result;
  result.rows.reserve(sizes.size());
  for (int n : sizes) {
    if (n < 2) {
      throw std::invalid_argument("run_reconstruction_bench: size < 2");
    }
    std::uint64_t work = 0;
    double micros = 0.0;
    for (int t = 0; t < trials; ++t) {
      Linearization d = bench_input(n, shape, rng);
      auto start = std::chrono::steady_clock::now();
      Node tree = reconstruct(d, rule, &work);
      auto stop = std::chrono::steady_clock::now();
      if (leaf_count(tree) != n) {
        throw std::logic_error("run_reconstruction_bench: bad reconstruction");
      }
      micros += std::chrono::duration<double, std::micro>(stop - start).count();
    }
    BenchRow row;
    row.n = n;
    row.trials = trials;
    row.mean_work = static_cast<double>(work) / trials;
    row.mean_micros = micros / trials;
    if (!result.rows.empty()) {
      row.ratio = row.mean_work / result.rows.back().mean_work;
    }
    result.rows.push_back(row);
  }

  if (result.rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const BenchRow& row : result.rows) {
      double x = std::log(static_cast<double>(row.n));
      double y = std::log(row.mean_work);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double m = static_cast<double>(result.rows.size());
    result.growth_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  return result;
}

std::string format_bench_table(const BenchResult& result, bool include_times) {
  std::ostringstream out;
  out << std::setw(8) << "n" << std::setw(8) << "trials" << std::setw(16)
      << "mean probes" << std::setw(10) << "ratio";
  if (include_times) out << std::setw(12) << "mean us";
  out << '\n';
  out << std::fixed;
  for (const BenchRow& row : result.rows) {
    out << std::setw(8) << row.n << std::setw(8) << row.trials
        << std::setprecision(1) << std::setw(16) << row.mean_work
        << std::setprecision(3) << std::setw(10);
    if (row.ratio > 0) {
      out << row.ratio;
    } else {
      out << "-";
    }
    if (include_times) {
      out << std::setprecision(1) << std::setw(12) << row.mean_micros;
    }
    out << '\n';
  }
  out << "growth: probes ~ n^" << std::setprecision(2)
      << result.growth_exponent << '\n';
  return out.str();
}

}  // namespace spanlin
