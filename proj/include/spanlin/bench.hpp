#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spanlin/linearization.hpp"

namespace spanlin {

enum class BenchShape { random_split, left_chain, right_chain };

BenchShape bench_shape_from_string(const std::string& name);

struct BenchRow {
  int n = 0;
  int trials = 0;
  double mean_work = 0.0;    // split-point probes per reconstruction
  double mean_micros = 0.0;  // wall clock, not deterministic
  double ratio = 0.0;        // mean_work vs the previous row, 0 for the first
};

struct BenchResult {
  std::vector<BenchRow> rows;
  // Least-squares slope of log mean_work against log n.
  double growth_exponent = 0.0;
};

// Reconstructs `trials` linearizations of each size and counts split-point
// probes. Work counts depend only on the seed; timings do not.
BenchResult run_reconstruction_bench(const std::vector<int>& sizes, int trials,
                                     BenchShape shape, SplitRule rule,
                                     std::uint64_t seed);

// Fixed-width table of the deterministic columns; timings are appended only
// when include_times is set.
std::string format_bench_table(const BenchResult& result, bool include_times);

}  // namespace spanlin
