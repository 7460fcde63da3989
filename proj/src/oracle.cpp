#include "spanlin/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace spanlin::oracle {

namespace {

void check_leaf_guard(int n) {
  if (n < 1 || n > kMaxLeaves) {
    throw std::invalid_argument("oracle guard: n = " + std::to_string(n) +
                                " outside [1, " + std::to_string(kMaxLeaves) +
                                "]");
  }
}

// Enumerates subtree shapes over `width` leaves into `out`, invoking `done`
// once per shape. Returns false to stop early.
bool generate(int width, Node& out, const std::function<bool()>& done) {
  if (width == 1) {
    out = Node{};
    return done();
  }
  for (int k = 1; k < width; ++k) {
    out = Node{};
    out.children.resize(2);
    Node& left = out.children[0];
    Node& right = out.children[1];
    bool keep_going = generate(k, left, [&]() {
      return generate(width - k, right, done);
    });
    if (!keep_going) return false;
  }
  return true;
}

bool enumerate_until(int n, const std::function<bool(const Node&)>& visit) {
  check_leaf_guard(n);
  Node scratch;
  return generate(n, scratch, [&]() { return visit(scratch); });
}

std::vector<int> preorder_splits(const Node& tree) {
  std::vector<SpanEntry> entries = preorder_spans(tree);
  std::vector<int> splits;
  for (std::size_t idx = 0; idx < entries.size(); ++idx) {
    if (entries[idx].node->children.size() == 2) {
      splits.push_back(entries[idx + 1].end);
    }
  }
  return splits;
}

}  // namespace

std::uint64_t catalan(int m) {
  if (m < 0 || m > 30) {
    throw std::invalid_argument("catalan: m outside [0, 30]");
  }
  // C(0) = 1, C(m+1) = sum_k C(k) C(m-k)
  std::vector<std::uint64_t> c(m + 1, 0);
  c[0] = 1;
  for (int t = 1; t <= m; ++t) {
    for (int k = 0; k < t; ++k) c[t] += c[k] * c[t - 1 - k];
  }
  return c[m];
}

void enumerate_trees(int n, const std::function<void(const Node&)>& visit) {
  enumerate_until(n, [&](const Node& tree) {
    visit(tree);
    return true;
  });
}

std::uint64_t tree_count(int n) {
  std::uint64_t count = 0;
  enumerate_trees(n, [&](const Node&) { ++count; });
  return count;
}

void for_each_bounded_sequence(
    int n, const std::function<void(const Linearization&)>& visit) {
  if (n < 1 || n > kMaxSequenceLength) {
    throw std::invalid_argument("oracle guard: n = " + std::to_string(n) +
                                " outside [1, " +
                                std::to_string(kMaxSequenceLength) + "]");
  }
  Linearization d(n, 0);
  while (true) {
    visit(d);
    // Odometer over digit ranges d_i in [0, i).
    int pos = n - 1;
    while (pos >= 0) {
      if (d[pos] + 1 <= pos) {
        ++d[pos];
        break;
      }
      d[pos] = 0;
      --pos;
    }
    if (pos < 0) return;
  }
}

bool legality_by_enumeration(const Linearization& d) {
  int n = static_cast<int>(d.size());
  if (n == 0) {
    throw std::invalid_argument("legality_by_enumeration: empty input");
  }
  bool found = false;
  enumerate_until(n, [&](const Node& tree) {
    if (linearize(tree) == d) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

std::pair<Node, double> best_tree_bruteforce(const ProbMatrix& p) {
  int n = p.size();
  check_leaf_guard(n);

  Node best_tree;
  double best_log = -std::numeric_limits<double>::infinity();
  std::vector<int> best_splits;
  bool have_best = false;

  enumerate_until(n, [&](const Node& tree) {
    Linearization d = linearize(tree);
    double log_prob = 0.0;
    for (int j = 1; j <= n; ++j) log_prob += std::log(p.at(d[j - 1], j));
    std::vector<int> splits = preorder_splits(tree);
    // Preorder comparison mirrors choosing the largest split top-down.
    bool better = !have_best || log_prob > best_log ||
                  (log_prob == best_log && splits > best_splits);
    if (better) {
      best_tree = tree;
      best_log = log_prob;
      best_splits = std::move(splits);
      have_best = true;
    }
    return true;
  });

  Linearization d = linearize(best_tree);
  double prob = 1.0;
  for (int j = 1; j <= n; ++j) prob *= p.at(d[j - 1], j);
  return {std::move(best_tree), prob};
}

}  // namespace spanlin::oracle
