#include "spanlin/tree.hpp"

#include <utility>

namespace spanlin {

std::string span_to_string(const Span& s) {
  return "(" + std::to_string(s.begin) + ", " + std::to_string(s.end) + ")";
}

const std::string& empty_label() {
  static const std::string label = "∅";
  return label;
}

const std::string& empty_label_serialized() {
  static const std::string label = "@EMPTY@";
  return label;
}

int leaf_count(const Node& root) {
  int n = 0;
  std::vector<const Node*> stack{&root};
  while (!stack.empty()) {
    const Node* node = stack.back();
    stack.pop_back();
    if (node->is_leaf()) {
      ++n;
      continue;
    }
    for (const Node& child : node->children) stack.push_back(&child);
  }
  return n;
}

std::vector<std::string> leaf_words(const Node& root) {
  std::vector<std::string> words;
  for (const SpanEntry& e : preorder_spans(root)) {
    if (e.node->is_leaf()) words.push_back(e.node->word);
  }
  return words;
}

namespace {

template <typename NodeEqual>
bool same_rec(const Node& a, const Node& b, NodeEqual equal) {
  std::vector<std::pair<const Node*, const Node*>> stack{{&a, &b}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    if (!equal(*x, *y)) return false;
    if (x->children.size() != y->children.size()) return false;
    for (std::size_t c = 0; c < x->children.size(); ++c) {
      stack.push_back({&x->children[c], &y->children[c]});
    }
  }
  return true;
}

}  // namespace

bool same_tree(const Node& a, const Node& b) {
  return same_rec(a, b, [](const Node& x, const Node& y) {
    return x.label == y.label && x.word == y.word;
  });
}

bool same_shape(const Node& a, const Node& b) {
  return same_rec(a, b, [](const Node&, const Node&) { return true; });
}

std::vector<SpanEntry> preorder_spans(const Node& root) {
  std::vector<SpanEntry> entries;
  struct Item {
    const Node* node;
    int parent;
  };
  std::vector<Item> stack{{&root, -1}};
  while (!stack.empty()) {
    Item item = stack.back();
    stack.pop_back();
    int idx = static_cast<int>(entries.size());
    entries.push_back({item.node, 0, 0, item.parent});
    const auto& children = item.node->children;
    for (auto it = children.rbegin(); it != children.rend(); ++it) {
      stack.push_back({&*it, idx});
    }
  }

  // Reverse preorder visits children before parents: accumulate widths up.
  std::vector<int> width(entries.size(), 0);
  for (int idx = static_cast<int>(entries.size()) - 1; idx >= 0; --idx) {
    if (entries[idx].node->is_leaf()) width[idx] = 1;
    if (entries[idx].parent >= 0) width[entries[idx].parent] += width[idx];
  }

  // Preorder visits parents before children: lay out begins left to right.
  std::vector<int> cursor(entries.size(), 0);
  for (std::size_t idx = 0; idx < entries.size(); ++idx) {
    int parent = entries[idx].parent;
    if (parent >= 0) {
      entries[idx].begin = cursor[parent];
      cursor[parent] += width[idx];
    }
    cursor[idx] = entries[idx].begin;
    entries[idx].end = entries[idx].begin + width[idx];
  }
  return entries;
}

std::set<Span> binary_internal_spans(const Node& root) {
  std::set<Span> spans;
  for (const SpanEntry& e : preorder_spans(root)) {
    if (e.node->children.size() == 2) spans.insert({e.begin, e.end});
  }
  return spans;
}

bool is_binary_shape(const Node& root) {
  std::vector<const Node*> stack{&root};
  while (!stack.empty()) {
    const Node* node = stack.back();
    stack.pop_back();
    if (node->is_leaf()) continue;
    if (node->children.size() == 1) {
      if (!node->children.front().is_leaf()) return false;
      continue;
    }
    if (node->children.size() != 2) return false;
    for (const Node& child : node->children) stack.push_back(&child);
  }
  return true;
}

}  // namespace spanlin
