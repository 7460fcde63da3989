#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spanlin/linearization.hpp"
#include "spanlin/tree.hpp"

namespace spanlin {

// Dense storage for one value per span (i, j) with 0 <= i < j <= n,
// n(n+1)/2 cells in total.
class TriangularMatrix {
 public:
  TriangularMatrix() = default;
  explicit TriangularMatrix(int n, double init = 0.0);

  int size() const { return n_; }
  double at(int i, int j) const { return cells_[offset(i, j)]; }
  double& at(int i, int j) { return cells_[offset(i, j)]; }

  static std::size_t cell_count(int n) {
    return static_cast<std::size_t>(n) * (n + 1) / 2;
  }

 private:
  std::size_t offset(int i, int j) const;
  int n_ = 0;
  std::vector<double> cells_;
};

// Raw span scores alpha_ij.
struct ScoreMatrix : TriangularMatrix {
  using TriangularMatrix::TriangularMatrix;
};

// P(i | j): for each right boundary j, a distribution over left
// boundaries i < j.
struct ProbMatrix : TriangularMatrix {
  using TriangularMatrix::TriangularMatrix;
};

// Boundary representations for a sentence of n words: one left-facing and
// one right-facing vector per split point 0..n.
struct SplitVectors {
  std::vector<std::vector<double>> left;
  std::vector<std::vector<double>> right;
  std::vector<std::vector<double>> weight;  // dim(left) x dim(right)
  std::vector<double> bias_left;
  std::vector<double> bias_right;
};

// alpha_ij = l_i^T W r_j + b1^T l_i + b2^T r_j for every 0 <= i < j <= n.
ScoreMatrix biaffine_score(const SplitVectors& vectors);

// Column-wise softmax with max shift; a column of equal scores yields
// exactly equal probabilities.
ProbMatrix normalize(const ScoreMatrix& scores);

// d_j = argmax_i P(i | j); ties pick the smallest i. The per-entry bound
// 0 <= d_j < j holds by construction.
Linearization predict_linearization(const ProbMatrix& p);

// Binary skeleton maximizing the product of left-child span probabilities.
// Computed in log space; ties pick the largest split point. Zero-probability
// cells only win when every candidate is zero.
Node cky_decode(const ProbMatrix& p);

// Sum over j of log P(d_j | j) for the tree's linearization; -infinity when
// a required cell is zero.
double tree_log_prob(const Node& binary_tree, const ProbMatrix& p);

struct MissingSpanError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per-span label distributions.
class LabelTable {
 public:
  LabelTable() = default;
  explicit LabelTable(int n) : n_(n) {}

  int size() const { return n_; }
  bool has(Span s) const { return dist_.count(s) != 0; }
  void set(Span s, const std::string& label, double prob);
  const std::vector<std::pair<std::string, double>>& distribution(
      Span s) const;

  // Highest-probability label; ties pick the lexicographically smallest.
  std::string argmax(Span s) const;

  // 0 when the span or the label is absent from the table.
  double prob(Span s, const std::string& label) const;

  const std::map<Span, std::vector<std::pair<std::string, double>>>& spans()
      const {
    return dist_;
  }

 private:
  int n_ = 0;
  std::map<Span, std::vector<std::pair<std::string, double>>> dist_;
};

// Probability 1 on each gold cell: P(d_j | j) = 1.
ProbMatrix one_hot_probabilities(const Linearization& d);

// Probability 1 on the gold label of every span of the binarized tree,
// including empty-labeled bare leaf spans.
LabelTable one_hot_labels(const Node& binary_tree);

// Labels every span of the skeleton with the table's argmax. Bare leaf
// spans grow a preterminal wrapper unless their label is the empty label;
// the root never takes the empty label.
Node assign_labels(const Node& skeleton, const LabelTable& labels);

// Mean negative log-likelihood of the gold binarized tree: structure terms
// log P(d_j | j) plus label terms over every span of the tree. A zero
// probability at a required cell yields +infinity. When
// include_empty_label_spans is false, spans whose gold label is the empty
// label are left out of the label sum.
double nll_loss(const Node& gold_binary_tree, const ProbMatrix& p,
                const LabelTable& labels,
                bool include_empty_label_spans = true);

// Score file: a block per sentence, "n=<int>" then one "j i value" line per
// cell in any order, exactly n(n+1)/2 of them. Values keep 17 significant
// digits, so save/load round-trips exactly.
std::vector<ScoreMatrix> parse_scores(std::istream& in);
std::vector<ScoreMatrix> load_scores(const std::string& path);
void save_scores(std::ostream& out, const ScoreMatrix& scores);
void save_scores(const std::string& path,
                 const std::vector<ScoreMatrix>& scores);

// Label file: a block per sentence, "n=<int>" then "i j label prob" lines.
// Each listed span's distribution must sum to 1 within 1e-9.
std::vector<LabelTable> parse_labels(std::istream& in);
std::vector<LabelTable> load_labels(const std::string& path);
void save_labels(std::ostream& out, const LabelTable& labels);
void save_labels(const std::string& path,
                 const std::vector<LabelTable>& labels);

}  // namespace spanlin
