#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "spanlin/tree.hpp"

namespace spanlin {

struct ParseError : std::runtime_error {
  ParseError(const std::string& message, int line, int column);
  std::string message;  // unformatted; what() prefixes the position
  int line;
  int column;
};

// The reserved empty label travels as "@EMPTY@" in files.
std::string serialize_label(const std::string& label);
std::string deserialize_label(const std::string& token);

// Reads every bracketed tree in the text, in document order. Whitespace
// between tokens is insignificant; "@EMPTY@" in label position maps to the
// reserved empty label.
std::vector<Tree> parse_bracketed(const std::string& text);

// Single-line bracketed form; the reserved empty label is written as
// "@EMPTY@". Requires every label and word to be non-empty.
std::string print_bracketed(const Node& tree);

// One tree per line; blank lines are skipped. Errors cite the file line.
std::vector<Tree> read_bracketed_file(const std::string& path);
void write_bracketed_file(const std::string& path,
                          const std::vector<Tree>& trees);

// Copies any skeleton into printable form: empty internal labels and leaf
// tags become `label`, empty leaf words become w1..wn.
Tree with_placeholders(const Node& tree, const std::string& label = "X");

// Drops leaves whose POS tag is exactly -NONE-, prunes internal nodes left
// childless, then deletes single-child ROOT/TOP wrappers at the root.
// Throws std::invalid_argument when nothing remains. Idempotent.
Tree preprocess(const Tree& tree);

// Right binarization: unary chains above the POS layer collapse into
// +-joined labels, and nodes with three or more children fold their
// rightmost children under the reserved empty label.
Tree binarize(const Tree& tree);

// Inverse of binarize: dissolves empty-labeled nodes into their parents and
// expands +-joined labels back into unary chains.
Tree debinarize(const Tree& tree);

// Label of every span of a binarized tree: internal nodes and preterminal
// wrappers keep their label, bare leaf spans get the empty label.
std::map<Span, std::string> span_labels(const Node& binary_tree);

struct Vocab {
  std::map<std::string, long long> counts;
  double unk_constant = 0.0;
};

// Counts leaf tokens over the corpus. unk_constant must be positive.
Vocab build_vocab(const std::vector<Tree>& corpus, double unk_constant);

// z / (z + count) for known words, 1 for unseen words.
double unk_probability(const Vocab& vocab, const std::string& word);

void save_vocab(const std::string& path, const Vocab& vocab);
Vocab load_vocab(const std::string& path);

}  // namespace spanlin
