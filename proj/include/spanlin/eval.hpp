#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "spanlin/tree.hpp"

namespace spanlin {

struct LabeledSpan {
  int begin = 0;
  int end = 0;
  std::string label;
  auto operator<=>(const LabeledSpan&) const = default;
};

// Labeled spans of every internal node above the POS layer, in preorder.
// Nested unary nodes contribute one span each; a bare preterminal
// contributes nothing. Duplicates are kept: matching is multiset-based.
std::vector<LabeledSpan> extract_eval_spans(
    const Node& tree, const std::set<std::string>& ignore_labels = {});

struct TriCount {
  long long matched = 0;
  long long gold = 0;
  long long predicted = 0;
};

struct Scores {
  double recall = 0.0;     // matched / gold
  double precision = 0.0;  // matched / predicted
  double f1 = 0.0;
};

// Zero denominators score 0 by convention.
Scores f1(const TriCount& counts);

struct EvalCounts {
  TriCount total;
  std::map<int, TriCount> by_length;  // keyed by bucket start: 1, 1+w, ...
  std::map<std::string, TriCount> by_label;
  int bucket_width = 5;

  EvalCounts& operator+=(const EvalCounts& other);
};

// Multiset matching of labeled spans between two trees over the same
// sentence length. Both trees must be debinarized.
EvalCounts score(const Node& gold, const Node& predicted,
                 const std::set<std::string>& ignore_labels = {},
                 int bucket_width = 5);

// Fixed-width tables plus machine-readable TOTAL / LEN / LABEL lines.
// Labels are ordered by gold frequency, most frequent first.
std::string format_report(const EvalCounts& counts);

}  // namespace spanlin
