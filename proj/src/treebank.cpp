#include "spanlin/treebank.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <utility>

#include "internal_util.hpp"

namespace spanlin {

namespace {

std::string format_position(const std::string& message, int line, int column) {
  return "line " + std::to_string(line) + ", column " +
         std::to_string(column) + ": " + message;
}

}  // namespace

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(format_position(message, line, column)),
      message(message),
      line(line),
      column(column) {}

namespace {

struct Token {
  enum Kind { open, close, symbol } kind;
  std::string text;
  int line;
  int column;
};

std::vector<Token> tokenize(const std::string& text, int* end_line,
                            int* end_column) {
  std::vector<Token> tokens;
  int line = 1;
  int column = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      column = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++column;
      ++i;
      continue;
    }
    if (c == '(' || c == ')') {
      tokens.push_back({c == '(' ? Token::open : Token::close,
                        std::string(1, c), line, column});
      ++column;
      ++i;
      continue;
    }
    int start_column = column;
    std::size_t start = i;
    while (i < text.size() && text[i] != '(' && text[i] != ')' &&
           text[i] != ' ' && text[i] != '\t' && text[i] != '\r' &&
           text[i] != '\n') {
      ++i;
      ++column;
    }
    tokens.push_back(
        {Token::symbol, text.substr(start, i - start), line, start_column});
  }
  *end_line = line;
  *end_column = column;
  return tokens;
}

}  // namespace

std::string serialize_label(const std::string& label) {
  return label == empty_label() ? empty_label_serialized() : label;
}

std::string deserialize_label(const std::string& token) {
  return token == empty_label_serialized() ? empty_label() : token;
}

std::vector<Tree> parse_bracketed(const std::string& text) {
  int end_line = 1;
  int end_column = 1;
  std::vector<Token> tokens = tokenize(text, &end_line, &end_column);
  std::vector<Tree> trees;
  std::vector<Node> stack;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const Token& t = tokens[i];
    switch (t.kind) {
      case Token::open: {
        if (!stack.empty() && !stack.back().word.empty()) {
          throw ParseError("unexpected '(' inside a leaf", t.line, t.column);
        }
        if (i + 1 >= tokens.size() || tokens[i + 1].kind != Token::symbol) {
          throw ParseError("node with empty label", t.line, t.column);
        }
        stack.push_back(Node{deserialize_label(tokens[i + 1].text), "", {}});
        i += 2;
        break;
      }
      case Token::symbol: {
        if (stack.empty()) {
          throw ParseError("token '" + t.text + "' outside any tree", t.line,
                           t.column);
        }
        Node& top = stack.back();
        if (!top.word.empty()) {
          throw ParseError("unexpected token '" + t.text +
                               "' after a leaf word",
                           t.line, t.column);
        }
        if (!top.children.empty()) {
          throw ParseError("unexpected word '" + t.text +
                               "' next to child nodes",
                           t.line, t.column);
        }
        top.word = t.text;
        ++i;
        break;
      }
      case Token::close: {
        if (stack.empty()) {
          throw ParseError("unmatched ')'", t.line, t.column);
        }
        Node node = std::move(stack.back());
        stack.pop_back();
        if (node.word.empty() && node.children.empty()) {
          throw ParseError("node '" + node.label + "' has no children",
                           t.line, t.column);
        }
        if (stack.empty()) {
          trees.push_back(std::move(node));
        } else {
          stack.back().children.push_back(std::move(node));
        }
        ++i;
        break;
      }
    }
  }
  if (!stack.empty()) {
    throw ParseError("unbalanced parentheses (" +
                         std::to_string(stack.size()) + " unclosed)",
                     end_line, end_column);
  }
  return trees;
}

std::string print_bracketed(const Node& tree) {
  std::string out;
  struct Item {
    const Node* node;
    std::size_t next;
  };
  std::vector<Item> stack{{&tree, 0}};
  while (!stack.empty()) {
    Item& top = stack.back();
    const Node& node = *top.node;
    if (top.next == 0) {
      if (node.label.empty()) {
        throw std::invalid_argument("print_bracketed: node with empty label");
      }
      out += '(';
      out += serialize_label(node.label);
      if (node.is_leaf()) {
        if (node.word.empty()) {
          throw std::invalid_argument("print_bracketed: leaf without a word");
        }
        out += ' ';
        out += node.word;
        out += ')';
        stack.pop_back();
        continue;
      }
    }
    if (top.next < node.children.size()) {
      const Node* child = &node.children[top.next++];
      out += ' ';
      stack.push_back({child, 0});
    } else {
      out += ')';
      stack.pop_back();
    }
  }
  return out;
}

std::vector<Tree> read_bracketed_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Tree> trees;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (detail::is_blank(line)) continue;
    std::vector<Tree> parsed;
    try {
      parsed = parse_bracketed(line);
    } catch (const ParseError& e) {
      throw ParseError(e.message + " (in " + path + ")", line_number,
                       e.column);
    }
    if (parsed.size() != 1) {
      throw ParseError("expected one tree per line, found " +
                           std::to_string(parsed.size()),
                       line_number, 1);
    }
    trees.push_back(std::move(parsed.front()));
  }
  return trees;
}

void write_bracketed_file(const std::string& path,
                          const std::vector<Tree>& trees) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (const Tree& tree : trees) out << print_bracketed(tree) << '\n';
}

namespace {

std::vector<std::vector<int>> child_lists(
    const std::vector<SpanEntry>& entries) {
  std::vector<std::vector<int>> kids(entries.size());
  for (std::size_t idx = 1; idx < entries.size(); ++idx) {
    kids[entries[idx].parent].push_back(static_cast<int>(idx));
  }
  return kids;
}

}  // namespace

Tree with_placeholders(const Node& tree, const std::string& label) {
  std::vector<SpanEntry> entries = preorder_spans(tree);
  std::vector<std::vector<int>> kids = child_lists(entries);
  std::vector<Node> built(entries.size());
  for (int idx = static_cast<int>(entries.size()) - 1; idx >= 0; --idx) {
    const Node& node = *entries[idx].node;
    Node out;
    out.label = node.label.empty() ? label : node.label;
    if (node.is_leaf()) {
      out.word = node.word.empty()
                     ? "w" + std::to_string(entries[idx].begin + 1)
                     : node.word;
    } else {
      out.children.reserve(kids[idx].size());
      for (int c : kids[idx]) out.children.push_back(std::move(built[c]));
    }
    built[idx] = std::move(out);
  }
  return std::move(built.front());
}

Tree preprocess(const Tree& tree) {
  std::vector<SpanEntry> entries = preorder_spans(tree);
  std::vector<std::vector<int>> kids = child_lists(entries);
  std::vector<std::optional<Node>> built(entries.size());
  for (int idx = static_cast<int>(entries.size()) - 1; idx >= 0; --idx) {
    const Node& node = *entries[idx].node;
    if (node.is_leaf()) {
      if (node.label != "-NONE-") built[idx] = node;
      continue;
    }
    Node out{node.label, "", {}};
    for (int c : kids[idx]) {
      if (built[c]) out.children.push_back(std::move(*built[c]));
    }
    if (!out.children.empty()) built[idx] = std::move(out);
  }
  if (!built.front()) {
    throw std::invalid_argument("tree is empty after preprocessing");
  }
  Tree root = std::move(*built.front());
  while (!root.is_leaf() && (root.label == "ROOT" || root.label == "TOP")) {
    if (root.children.size() != 1) {
      throw std::invalid_argument("cannot delete root wrapper '" +
                                  root.label + "' with " +
                                  std::to_string(root.children.size()) +
                                  " children");
    }
    Node child = std::move(root.children.front());
    root = std::move(child);
  }
  return root;
}

namespace {

void check_internal_label(const std::string& label) {
  if (label.empty()) {
    throw std::invalid_argument("binarize: internal node with empty label");
  }
  if (label.find(kUnarySeparator) != std::string::npos ||
      label.find(empty_label()) != std::string::npos ||
      label.find(empty_label_serialized()) != std::string::npos) {
    throw std::invalid_argument("binarize: label '" + label +
                                "' contains a reserved marker");
  }
}

}  // namespace

Tree binarize(const Tree& tree) {
  std::vector<SpanEntry> entries = preorder_spans(tree);
  for (const SpanEntry& e : entries) {
    if (!e.node->is_leaf()) check_internal_label(e.node->label);
  }
  std::vector<std::vector<int>> kids = child_lists(entries);
  std::vector<Node> built(entries.size());
  for (int idx = static_cast<int>(entries.size()) - 1; idx >= 0; --idx) {
    const Node& node = *entries[idx].node;
    if (node.is_leaf()) {
      built[idx] = node;
      continue;
    }
    std::vector<Node> children;
    children.reserve(kids[idx].size());
    for (int c : kids[idx]) children.push_back(std::move(built[c]));
    Node out;
    if (children.size() == 1) {
      Node& child = children.front();
      if (child.is_leaf()) {
        out = Node{node.label, "", std::move(children)};
      } else {
        // Unary chain over an already-binarized child: join the labels and
        // absorb the child's children.
        out = Node{node.label + kUnarySeparator + child.label, "",
                   std::move(child.children)};
      }
    } else if (children.size() == 2) {
      out = Node{node.label, "", std::move(children)};
    } else {
      // Fold the rightmost children pairwise under the empty label.
      Node acc{empty_label(), "", {}};
      acc.children.reserve(2);
      std::size_t m = children.size();
      acc.children.push_back(std::move(children[m - 2]));
      acc.children.push_back(std::move(children[m - 1]));
      for (std::size_t t = m - 2; t-- > 1;) {
        Node next{empty_label(), "", {}};
        next.children.reserve(2);
        next.children.push_back(std::move(children[t]));
        next.children.push_back(std::move(acc));
        acc = std::move(next);
      }
      out = Node{node.label, "", {}};
      out.children.reserve(2);
      out.children.push_back(std::move(children[0]));
      out.children.push_back(std::move(acc));
    }
    built[idx] = std::move(out);
  }
  return std::move(built.front());
}

Tree debinarize(const Tree& tree) {
  if (!tree.is_leaf() && tree.label == empty_label()) {
    throw std::invalid_argument("debinarize: empty label at the root");
  }
  std::vector<SpanEntry> entries = preorder_spans(tree);
  std::vector<std::vector<int>> kids = child_lists(entries);
  std::vector<Node> built(entries.size());
  for (int idx = static_cast<int>(entries.size()) - 1; idx >= 0; --idx) {
    const Node& node = *entries[idx].node;
    if (node.is_leaf()) {
      built[idx] = node;
      continue;
    }
    std::vector<Node> children;
    for (int c : kids[idx]) {
      Node& child = built[c];
      if (!child.is_leaf() && child.label == empty_label()) {
        for (Node& grandchild : child.children) {
          children.push_back(std::move(grandchild));
        }
      } else {
        children.push_back(std::move(child));
      }
    }
    if (node.label == empty_label()) {
      // Dissolved by the parent; keep the label so it can recognize it.
      built[idx] = Node{empty_label(), "", std::move(children)};
      continue;
    }
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      std::size_t sep = node.label.find(kUnarySeparator, start);
      if (sep == std::string::npos) {
        parts.push_back(node.label.substr(start));
        break;
      }
      parts.push_back(node.label.substr(start, sep - start));
      start = sep + 1;
    }
    Node out{parts.back(), "", std::move(children)};
    for (std::size_t p = parts.size() - 1; p-- > 0;) {
      Node wrap{parts[p], "", {}};
      wrap.children.push_back(std::move(out));
      out = std::move(wrap);
    }
    built[idx] = std::move(out);
  }
  return std::move(built.front());
}

std::map<Span, std::string> span_labels(const Node& binary_tree) {
  if (!is_binary_shape(binary_tree)) {
    throw std::invalid_argument("span_labels: tree is not binarized");
  }
  std::vector<SpanEntry> entries = preorder_spans(binary_tree);
  std::map<Span, std::string> labels;
  for (const SpanEntry& e : entries) {
    if (e.node->is_leaf()) continue;
    Span s{e.begin, e.end};
    if (!labels.emplace(s, e.node->label).second) {
      throw std::invalid_argument("span_labels: duplicate span " +
                                  span_to_string(s));
    }
  }
  int n = entries.front().end;
  for (int k = 0; k < n; ++k) {
    labels.emplace(Span{k, k + 1}, empty_label());
  }
  return labels;
}

Vocab build_vocab(const std::vector<Tree>& corpus, double unk_constant) {
  if (corpus.empty()) {
    throw std::invalid_argument("build_vocab: empty corpus");
  }
  if (!(unk_constant > 0.0)) {
    throw std::invalid_argument("build_vocab: unk constant must be positive");
  }
  Vocab vocab;
  vocab.unk_constant = unk_constant;
  for (const Tree& tree : corpus) {
    for (const std::string& word : leaf_words(tree)) ++vocab.counts[word];
  }
  return vocab;
}

double unk_probability(const Vocab& vocab, const std::string& word) {
  auto it = vocab.counts.find(word);
  if (it == vocab.counts.end()) return 1.0;
  return vocab.unk_constant /
         (vocab.unk_constant + static_cast<double>(it->second));
}

void save_vocab(const std::string& path, const Vocab& vocab) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "#z=" << detail::format_double(vocab.unk_constant) << '\n';
  for (const auto& [token, count] : vocab.counts) {
    out << token << '\t' << count << '\n';
  }
}

Vocab load_vocab(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("#z=", 0) != 0) {
    throw ParseError("expected '#z=<value>' header", 1, 1);
  }
  auto z = detail::parse_double(line.substr(3));
  if (!z || !(*z > 0.0)) {
    throw ParseError("invalid unk constant '" + line.substr(3) + "'", 1, 1);
  }
  Vocab vocab;
  vocab.unk_constant = *z;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (detail::is_blank(line)) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ParseError("expected 'token<TAB>count'", line_number, 1);
    }
    std::string token = line.substr(0, tab);
    auto count = detail::parse_int(line.substr(tab + 1));
    if (!count || *count < 1) {
      throw ParseError("invalid count for token '" + token + "'",
                       line_number, 1);
    }
    if (!vocab.counts.emplace(token, *count).second) {
      throw ParseError("duplicate token '" + token + "'", line_number, 1);
    }
  }
  return vocab;
}

}  // namespace spanlin
