#include "spanlin/linearization.hpp"

#include <array>
#include <string>
#include <unordered_map>

namespace spanlin {

Linearization linearize(const Node& binary_tree) {
  if (!is_binary_shape(binary_tree)) {
    throw std::invalid_argument("linearize: tree is not binarized");
  }
  std::vector<SpanEntry> entries = preorder_spans(binary_tree);
  int n = entries.front().end;
  Linearization d(n, 0);
  for (std::size_t idx = 0; idx < entries.size(); ++idx) {
    if (entries[idx].node->children.size() != 2) continue;
    // The left child follows its parent in preorder; its end is the split.
    int split = entries[idx + 1].end;
    d[split - 1] = entries[idx].begin;
  }
  d[n - 1] = 0;
  return d;
}

std::set<Span> left_child_spans(const Node& binary_tree) {
  if (!is_binary_shape(binary_tree)) {
    throw std::invalid_argument("left_child_spans: tree is not binarized");
  }
  std::vector<SpanEntry> entries = preorder_spans(binary_tree);
  std::set<Span> spans;
  for (std::size_t idx = 0; idx < entries.size(); ++idx) {
    if (entries[idx].node->children.size() != 2) continue;
    spans.insert({entries[idx + 1].begin, entries[idx + 1].end});
  }
  spans.insert({0, entries.front().end});
  return spans;
}

LegalityReport check_legality(const Linearization& d) {
  if (d.empty()) throw std::invalid_argument("check_legality: empty input");
  int n = static_cast<int>(d.size());
  LegalityReport report;
  for (int i = 1; i <= n; ++i) {
    if (d[i - 1] < 0 || d[i - 1] >= i) report.bound_violations.push_back(i);
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      if (d[i - 1] < d[j - 1] && d[j - 1] < i) {
        report.crossing_pairs.emplace_back(i, j);
      }
    }
  }
  report.open_root = d[n - 1] != 0;
  report.legal = report.bound_violations.empty() &&
                 report.crossing_pairs.empty() && !report.open_root;
  return report;
}

bool is_legal(const Linearization& d) { return check_legality(d).legal; }

std::string describe(const LegalityReport& report) {
  if (report.legal) return "legal";
  std::string out;
  auto append = [&out](const std::string& part) {
    if (!out.empty()) out += "; ";
    out += part;
  };
  for (int i : report.bound_violations) {
    append("d_" + std::to_string(i) + " outside [0, " + std::to_string(i) +
           ")");
  }
  for (const auto& [i, j] : report.crossing_pairs) {
    append("d_" + std::to_string(j) + " falls strictly inside (d_" +
           std::to_string(i) + ", " + std::to_string(i) + ")");
  }
  if (report.open_root) append("last entry is nonzero");
  return out;
}

Node build_binary_skeleton(int n,
                           const std::function<int(int, int)>& split_of) {
  if (n < 1) throw std::invalid_argument("build_binary_skeleton: n < 1");
  if (n == 1) return Node{};

  // Record split decisions first; every child span is recorded after its
  // parent, so a reverse sweep assembles children before parents.
  std::vector<std::array<int, 3>> splits;
  splits.reserve(n - 1);
  std::vector<Span> stack{{0, n}};
  while (!stack.empty()) {
    Span s = stack.back();
    stack.pop_back();
    if (s.end - s.begin == 1) continue;
    int k = split_of(s.begin, s.end);
    if (k <= s.begin || k >= s.end) {
      throw std::logic_error("build_binary_skeleton: split outside span");
    }
    splits.push_back({s.begin, s.end, k});
    stack.push_back({k, s.end});
    stack.push_back({s.begin, k});
  }

  auto key = [n](int b, int e) {
    return static_cast<std::uint64_t>(b) * (n + 1) + e;
  };
  std::unordered_map<std::uint64_t, Node> built;
  built.reserve(splits.size());
  auto take = [&](int b, int e) -> Node {
    if (e - b == 1) return Node{};
    auto it = built.find(key(b, e));
    Node out = std::move(it->second);
    built.erase(it);
    return out;
  };
  for (auto it = splits.rbegin(); it != splits.rend(); ++it) {
    const auto& [b, e, k] = *it;
    Node node;
    node.children.reserve(2);
    node.children.push_back(take(b, k));
    node.children.push_back(take(k, e));
    built.emplace(key(b, e), std::move(node));
  }
  return std::move(built.at(key(0, n)));
}

namespace {

int pick_split(const Linearization& d, int i, int j, SplitRule rule,
               std::uint64_t* work) {
  if (rule == SplitRule::argmin) {
    // Scanning right to left keeps the largest index among minima.
    int best = j - 1;
    int best_value = d[best - 1];
    if (work) ++*work;
    for (int k = j - 2; k > i; --k) {
      if (work) ++*work;
      if (d[k - 1] < best_value) {
        best = k;
        best_value = d[k - 1];
      }
    }
    return best;
  }
  for (int k = j - 1; k > i; --k) {
    if (work) ++*work;
    if (rule == SplitRule::exact ? d[k - 1] == i : d[k - 1] <= i) return k;
  }
  // Unreachable for leq: d_{i+1} <= i holds by the per-entry bound.
  throw LegalityError("no split point with d_k = " + std::to_string(i) +
                      " inside span (" + std::to_string(i) + ", " +
                      std::to_string(j) + ")");
}

}  // namespace

Node reconstruct(const Linearization& d, SplitRule rule,
                 std::uint64_t* work) {
  if (d.empty()) throw std::invalid_argument("reconstruct: empty input");
  int n = static_cast<int>(d.size());
  for (int i = 1; i <= n; ++i) {
    if (d[i - 1] < 0 || d[i - 1] >= i) {
      throw LegalityError("d_" + std::to_string(i) + " = " +
                          std::to_string(d[i - 1]) + " outside [0, " +
                          std::to_string(i) + ")");
    }
  }
  return build_binary_skeleton(
      n, [&](int i, int j) { return pick_split(d, i, j, rule, work); });
}

Node reconstruct_exact(const Linearization& d, std::uint64_t* work) {
  return reconstruct(d, SplitRule::exact, work);
}

Node reconstruct_leq(const Linearization& d, std::uint64_t* work) {
  return reconstruct(d, SplitRule::leq, work);
}

Node reconstruct_argmin(const Linearization& d, std::uint64_t* work) {
  return reconstruct(d, SplitRule::argmin, work);
}

}  // namespace spanlin
