#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spanlin/tree.hpp"

namespace spanlin {

// d_1 ... d_n stored zero-based: d[j-1] is the left boundary of the longest
// span ending at j. Always has one entry per word.
using Linearization = std::vector<int>;

struct LegalityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LegalityReport {
  bool legal = true;
  // Positions i (1-based) where d_i falls outside [0, i).
  std::vector<int> bound_violations;
  // Pairs i < j with d_i < d_j < i; such spans would cross.
  std::vector<std::pair<int, int>> crossing_pairs;
  // Set when d_n != 0, i.e. the last entry does not close the root span.
  bool open_root = false;
};

// Requires a binarized tree; one entry per split point plus the root entry.
Linearization linearize(const Node& binary_tree);

// Spans that sit as the left child of their parent, plus the root span.
std::set<Span> left_child_spans(const Node& binary_tree);

LegalityReport check_legality(const Linearization& d);
bool is_legal(const Linearization& d);
std::string describe(const LegalityReport& report);

enum class SplitRule { exact, leq, argmin };

// Rebuilds a binary skeleton from d. `exact` assumes a legal input and
// inverts linearize; `leq` and `argmin` are total for any d meeting the
// per-entry bound 0 <= d_i < i. When `work` is given it accumulates the
// number of split candidates examined.
Node reconstruct(const Linearization& d, SplitRule rule,
                 std::uint64_t* work = nullptr);
Node reconstruct_exact(const Linearization& d, std::uint64_t* work = nullptr);
Node reconstruct_leq(const Linearization& d, std::uint64_t* work = nullptr);
Node reconstruct_argmin(const Linearization& d, std::uint64_t* work = nullptr);

// Builds the skeleton over n leaves whose split points come from the
// callback; split_of(i, j) must return k with i < k < j. Iterative, so
// arbitrarily deep results are safe to build.
Node build_binary_skeleton(int n,
                           const std::function<int(int, int)>& split_of);

}  // namespace spanlin
