#include "spanlin/random_trees.hpp"

#include <stdexcept>
#include <utility>

namespace spanlin {

namespace {

const std::vector<std::string>& phrase_labels() {
  static const std::vector<std::string> pool = {"S",    "NP",   "VP",  "PP",
                                                "SBAR", "ADJP", "ADVP"};
  return pool;
}

const std::vector<std::string>& pos_labels() {
  static const std::vector<std::string> pool = {"NN", "VBZ", "DT", "JJ",
                                                "IN", "PRP", "RB"};
  return pool;
}

const std::string& pick(const std::vector<std::string>& pool,
                        std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> idx(0, pool.size() - 1);
  return pool[idx(rng)];
}

Node make_leaf(int position) {
  Node leaf;
  leaf.word = "w" + std::to_string(position);
  return leaf;
}

}  // namespace

Node random_skeleton(int n, std::mt19937_64& rng) {
  if (n < 1) throw std::invalid_argument("random_skeleton: n < 1");
  if (n == 1) return make_leaf(1);
  Node tree = build_binary_skeleton(n, [&rng](int i, int j) {
    std::uniform_int_distribution<int> split(i + 1, j - 1);
    return split(rng);
  });
  // Attach words so the result also serves as parser input.
  std::vector<Node*> stack{&tree};
  int position = 0;
  while (!stack.empty()) {
    Node* node = stack.back();
    stack.pop_back();
    if (node->is_leaf()) {
      *node = make_leaf(++position);
      continue;
    }
    for (auto child = node->children.rbegin(); child != node->children.rend();
         ++child) {
      stack.push_back(&*child);
    }
  }
  return tree;
}

Node left_chain_skeleton(int n) {
  if (n < 1) throw std::invalid_argument("left_chain_skeleton: n < 1");
  Node tree = make_leaf(1);
  for (int i = 2; i <= n; ++i) {
    Node parent;
    parent.children.reserve(2);
    parent.children.push_back(std::move(tree));
    parent.children.push_back(make_leaf(i));
    tree = std::move(parent);
  }
  return tree;
}

Node right_chain_skeleton(int n) {
  if (n < 1) throw std::invalid_argument("right_chain_skeleton: n < 1");
  Node tree = make_leaf(n);
  for (int i = n - 1; i >= 1; --i) {
    Node parent;
    parent.children.reserve(2);
    parent.children.push_back(make_leaf(i));
    parent.children.push_back(std::move(tree));
    tree = std::move(parent);
  }
  return tree;
}

Tree random_const_tree(int n, std::mt19937_64& rng) {
  if (n < 1) throw std::invalid_argument("random_const_tree: n < 1");
  std::vector<Node> forest;
  forest.reserve(n);
  for (int i = 1; i <= n; ++i) {
    Node leaf = make_leaf(i);
    leaf.label = pick(pos_labels(), rng);
    forest.push_back(std::move(leaf));
  }

  std::bernoulli_distribution wrap(0.15);
  int wraps_left = n;
  while (forest.size() > 1 || (forest.size() == 1 && forest[0].is_leaf())) {
    if (forest.size() > 1 && wraps_left > 0 && wrap(rng)) {
      std::uniform_int_distribution<std::size_t> idx(0, forest.size() - 1);
      std::size_t at = idx(rng);
      Node unary;
      unary.label = pick(phrase_labels(), rng);
      unary.children.push_back(std::move(forest[at]));
      forest[at] = std::move(unary);
      --wraps_left;
      continue;
    }
    std::size_t max_arity = std::min<std::size_t>(4, forest.size());
    std::uniform_int_distribution<std::size_t> arity_dist(
        std::min<std::size_t>(2, max_arity), max_arity);
    std::size_t arity = arity_dist(rng);
    std::uniform_int_distribution<std::size_t> start_dist(
        0, forest.size() - arity);
    std::size_t start = start_dist(rng);

    Node parent;
    parent.label = pick(phrase_labels(), rng);
    parent.children.reserve(arity);
    for (std::size_t c = 0; c < arity; ++c) {
      parent.children.push_back(std::move(forest[start + c]));
    }
    forest.erase(forest.begin() + start + 1, forest.begin() + start + arity);
    forest[start] = std::move(parent);
  }
  return std::move(forest.front());
}

Linearization random_condition1(int n, std::mt19937_64& rng) {
  if (n < 1) throw std::invalid_argument("random_condition1: n < 1");
  Linearization d(n, 0);
  for (int i = 2; i <= n; ++i) {
    std::uniform_int_distribution<int> entry(0, i - 1);
    d[i - 1] = entry(rng);
  }
  return d;
}

ScoreMatrix random_scores(int n, std::mt19937_64& rng, double low,
                          double high) {
  if (n < 1) throw std::invalid_argument("random_scores: n < 1");
  std::uniform_real_distribution<double> value(low, high);
  ScoreMatrix scores(n);
  for (int j = 1; j <= n; ++j) {
    for (int i = 0; i < j; ++i) scores.at(i, j) = value(rng);
  }
  return scores;
}

}  // namespace spanlin
