#pragma once

#include <compare>
#include <set>
#include <string>
#include <vector>

namespace spanlin {

// Ordered constituent tree node. Internal nodes carry a constituent label
// and one or more children; leaves carry the token in `word` and its POS
// tag in `label`. A node is a leaf iff it has no children.
struct Node {
  std::string label;
  std::string word;
  std::vector<Node> children;

  bool is_leaf() const { return children.empty(); }
};

using Tree = Node;

// Half-open span [begin, end) over leaf boundaries 0..n.
struct Span {
  int begin = 0;
  int end = 0;
  auto operator<=>(const Span&) const = default;
};

std::string span_to_string(const Span& s);

// Label reserved for nodes introduced by binarization. Rendered as
// "@EMPTY@" wherever trees or label tables are serialized.
const std::string& empty_label();
const std::string& empty_label_serialized();

// Separator used when collapsing unary chains into a single label.
inline constexpr char kUnarySeparator = '+';

int leaf_count(const Node& root);
std::vector<std::string> leaf_words(const Node& root);

bool same_tree(const Node& a, const Node& b);   // labels, words and structure
bool same_shape(const Node& a, const Node& b);  // structure only

// Preorder listing of every node with its span. `parent` indexes into the
// returned vector, -1 for the root. A node's first child, when present,
// sits at the next index.
struct SpanEntry {
  const Node* node;
  int begin;
  int end;
  int parent;
};
std::vector<SpanEntry> preorder_spans(const Node& root);

// Spans of internal nodes with exactly two children.
std::set<Span> binary_internal_spans(const Node& root);

// True if every internal node either has two children or is a preterminal
// wrapper holding a single leaf.
bool is_binary_shape(const Node& root);

}  // namespace spanlin
