#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "spanlin/decoder.hpp"
#include "spanlin/eval.hpp"
#include "spanlin/oracle.hpp"
#include "spanlin/random_trees.hpp"
#include "spanlin/treebank.hpp"

using namespace spanlin;

namespace {

const char* kExample =
    "(S (NP (PRP She)) (VP (VBZ loves) (S (VP (VBG writing) (NP (NN code)))))"
    " (. .))";

Tree example_binary() {
  return binarize(parse_bracketed(kExample).front());
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("triangular matrix layout") {
  TriangularMatrix m(3, -1.0);
  CHECK(m.size() == 3);
  CHECK(TriangularMatrix::cell_count(3) == 6);
  CHECK(m.at(0, 3) == -1.0);
  m.at(2, 3) = 7.0;
  CHECK(m.at(2, 3) == 7.0);
  CHECK(m.at(0, 1) == -1.0);
  CHECK_THROWS_AS(m.at(1, 1), std::out_of_range);
  CHECK_THROWS_AS(m.at(-1, 2), std::out_of_range);
  CHECK_THROWS_AS(m.at(0, 4), std::out_of_range);
  CHECK_THROWS_AS(TriangularMatrix(-1), std::invalid_argument);
}

TEST_CASE("biaffine scores in one dimension") {
  // alpha_ij = 3 * i * 2 + 5 * i + 7 * 2 = 11 i + 14
  SplitVectors v;
  for (int k = 0; k <= 2; ++k) {
    v.left.push_back({static_cast<double>(k)});
    v.right.push_back({2.0});
  }
  v.weight = {{3.0}};
  v.bias_left = {5.0};
  v.bias_right = {7.0};
  ScoreMatrix s = biaffine_score(v);
  CHECK(s.size() == 2);
  CHECK(s.at(0, 1) == 14.0);
  CHECK(s.at(0, 2) == 14.0);
  CHECK(s.at(1, 2) == 25.0);
}

TEST_CASE("biaffine scores in two dimensions") {
  // l_i = (1, i), r_j = (j); alpha_ij = (5 + i) j + 1 + i
  SplitVectors v;
  for (int k = 0; k <= 3; ++k) {
    v.left.push_back({1.0, static_cast<double>(k)});
    v.right.push_back({static_cast<double>(k)});
  }
  v.weight = {{2.0}, {1.0}};
  v.bias_left = {1.0, 1.0};
  v.bias_right = {3.0};
  ScoreMatrix s = biaffine_score(v);
  CHECK(s.size() == 3);
  CHECK(s.at(0, 1) == 6.0);
  CHECK(s.at(0, 2) == 11.0);
  CHECK(s.at(1, 2) == 14.0);
  CHECK(s.at(2, 3) == 24.0);
}

TEST_CASE("biaffine dimension checks") {
  SplitVectors v;
  v.left = {{1.0}, {1.0}};
  v.right = {{1.0}, {1.0}};
  v.weight = {{1.0}};
  v.bias_left = {1.0};
  v.bias_right = {1.0};
  CHECK(biaffine_score(v).size() == 1);

  SplitVectors bad = v;
  bad.right.pop_back();
  CHECK_THROWS_AS(biaffine_score(bad), std::invalid_argument);
  bad = v;
  bad.weight = {{1.0}, {1.0}};
  CHECK_THROWS_AS(biaffine_score(bad), std::invalid_argument);
  bad = v;
  bad.left[1] = {1.0, 2.0};
  CHECK_THROWS_AS(biaffine_score(bad), std::invalid_argument);
  bad = v;
  bad.bias_right = {};
  CHECK_THROWS_AS(biaffine_score(bad), std::invalid_argument);
}

TEST_CASE("softmax normalization") {
  ScoreMatrix s(2);
  s.at(0, 1) = 3.0;
  s.at(0, 2) = 0.0;
  s.at(1, 2) = std::log(3.0);
  ProbMatrix p = normalize(s);
  CHECK(p.at(0, 1) == 1.0);
  CHECK(p.at(0, 2) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(p.at(1, 2) == doctest::Approx(0.75).epsilon(1e-12));

  // Equal scores produce bitwise-equal probabilities.
  ProbMatrix uniform = normalize(ScoreMatrix(5, 2.5));
  for (int j = 1; j <= 5; ++j) {
    double sum = 0.0;
    for (int i = 0; i < j; ++i) {
      CHECK(uniform.at(i, j) == uniform.at(0, j));
      sum += uniform.at(i, j);
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }

  ScoreMatrix inf_scores(2);
  inf_scores.at(0, 2) = kInf;
  CHECK_THROWS_AS(normalize(inf_scores), std::invalid_argument);
  CHECK_THROWS_AS(normalize(ScoreMatrix(0)), std::invalid_argument);
}

TEST_CASE("normalization is shift invariant per column") {
  std::mt19937_64 rng(21);
  ScoreMatrix s = random_scores(6, rng);
  ScoreMatrix shifted(6);
  for (int j = 1; j <= 6; ++j) {
    double delta = static_cast<double>(j) * 3.25 - 8.0;
    for (int i = 0; i < j; ++i) shifted.at(i, j) = s.at(i, j) + delta;
  }
  ProbMatrix p = normalize(s);
  ProbMatrix q = normalize(shifted);
  for (int j = 1; j <= 6; ++j) {
    for (int i = 0; i < j; ++i) {
      CHECK(p.at(i, j) == doctest::Approx(q.at(i, j)).epsilon(1e-12));
    }
  }
  // The decoded structures do not move at all.
  CHECK(predict_linearization(p) == predict_linearization(q));
  CHECK(same_shape(cky_decode(p), cky_decode(q)));
}

TEST_CASE("pointwise prediction") {
  ProbMatrix p(3);
  p.at(0, 1) = 1.0;
  p.at(0, 2) = 0.4;
  p.at(1, 2) = 0.6;
  p.at(0, 3) = 0.2;
  p.at(1, 3) = 0.5;
  p.at(2, 3) = 0.3;
  CHECK(predict_linearization(p) == Linearization{0, 1, 1});

  // Ties pick the smallest left boundary.
  ProbMatrix uniform = normalize(ScoreMatrix(4, 0.0));
  CHECK(predict_linearization(uniform) == Linearization{0, 0, 0, 0});

  ProbMatrix bad(2);
  bad.at(0, 2) = -0.5;
  CHECK_THROWS_AS(predict_linearization(bad), std::invalid_argument);
}

TEST_CASE("one-hot probabilities") {
  ProbMatrix p = one_hot_probabilities({0, 1, 2, 1, 0});
  CHECK(p.at(0, 1) == 1.0);
  CHECK(p.at(1, 4) == 1.0);
  CHECK(p.at(0, 4) == 0.0);
  CHECK(predict_linearization(p) == Linearization{0, 1, 2, 1, 0});
  CHECK_THROWS_AS(one_hot_probabilities({}), std::invalid_argument);
  CHECK_THROWS_AS(one_hot_probabilities({1}), std::invalid_argument);
}

TEST_CASE("tree log probability") {
  ProbMatrix p = one_hot_probabilities({0, 1, 2, 1, 0});
  CHECK(tree_log_prob(example_binary(), p) == 0.0);
  CHECK(tree_log_prob(reconstruct_exact({0, 1, 2, 1, 0}), p) == 0.0);
  // A tree using a zero cell has log probability -infinity.
  CHECK(tree_log_prob(reconstruct_exact({0, 0, 0, 0, 0}), p) == -kInf);
  CHECK_THROWS_AS(tree_log_prob(reconstruct_exact({0, 0}), p),
                  std::invalid_argument);
}

TEST_CASE("chart decoding") {
  ProbMatrix p = one_hot_probabilities({0, 1, 2, 1, 0});
  CHECK(binary_internal_spans(cky_decode(p)) ==
        std::set<Span>{{0, 5}, {1, 5}, {1, 4}, {2, 4}});

  CHECK(leaf_count(cky_decode(one_hot_probabilities({0}))) == 1);

  // All-zero columns fall back to the largest split.
  ProbMatrix zeros(3);
  Node fallback = cky_decode(zeros);
  CHECK(binary_internal_spans(fallback) == std::set<Span>{{0, 3}, {0, 2}});

  ProbMatrix bad(2);
  bad.at(0, 2) = kInf;
  CHECK_THROWS_AS(cky_decode(bad), std::invalid_argument);
}

TEST_CASE("label tables") {
  LabelTable table(3);
  table.set({0, 3}, "S", 0.6);
  table.set({0, 3}, "NP", 0.4);
  table.set({0, 1}, empty_label(), 1.0);
  CHECK(table.argmax({0, 3}) == "S");
  CHECK(table.prob({0, 3}, "NP") == 0.4);
  CHECK(table.prob({0, 3}, "VP") == 0.0);
  CHECK(table.has({0, 1}));
  CHECK_FALSE(table.has({1, 2}));
  CHECK_THROWS_AS(table.argmax({1, 2}), MissingSpanError);
  CHECK_THROWS_AS(table.set({0, 4}, "S", 1.0), std::out_of_range);
  CHECK_THROWS_AS(table.set({0, 2}, "S", -1.0), std::invalid_argument);

  // Overwrites replace, ties prefer the smaller label.
  table.set({0, 3}, "NP", 0.6);
  CHECK(table.argmax({0, 3}) == "NP");
}

TEST_CASE("one-hot labels recover the tree") {
  Tree binary = example_binary();
  LabelTable labels = one_hot_labels(binary);
  CHECK(labels.argmax({0, 5}) == "S");
  CHECK(labels.argmax({1, 5}) == empty_label());
  CHECK(labels.argmax({2, 4}) == "S+VP");
  CHECK(labels.argmax({4, 5}) == empty_label());

  // Skeleton leaves carry no tags or words, so compare span labels: every
  // constituent of the binarized tree comes back, label for label.
  Node skeleton = reconstruct_exact(linearize(binary));
  Tree relabeled = assign_labels(skeleton, labels);
  CHECK(span_labels(relabeled) == span_labels(binary));
  CHECK(extract_eval_spans(debinarize(relabeled)) ==
        extract_eval_spans(parse_bracketed(kExample).front()));
}

TEST_CASE("label assignment details") {
  // Root spans never take the empty label.
  Node two = reconstruct_exact({0, 0});
  LabelTable root_tie(2);
  root_tie.set({0, 2}, empty_label(), 0.9);
  root_tie.set({0, 2}, "S", 0.1);
  root_tie.set({0, 1}, empty_label(), 1.0);
  root_tie.set({1, 2}, empty_label(), 1.0);
  Tree labeled = assign_labels(two, root_tie);
  CHECK(labeled.label == "S");
  CHECK(labeled.children.size() == 2);
  CHECK(labeled.children[0].is_leaf());

  LabelTable only_empty(2);
  only_empty.set({0, 2}, empty_label(), 1.0);
  only_empty.set({0, 1}, empty_label(), 1.0);
  only_empty.set({1, 2}, empty_label(), 1.0);
  CHECK_THROWS_AS(assign_labels(two, only_empty), std::runtime_error);

  // Non-empty leaf labels grow preterminal wrappers.
  LabelTable wrapping(2);
  wrapping.set({0, 2}, "S", 1.0);
  wrapping.set({0, 1}, "NP", 1.0);
  wrapping.set({1, 2}, empty_label(), 1.0);
  Tree wrapped = assign_labels(two, wrapping);
  CHECK(wrapped.children[0].label == "NP");
  CHECK(wrapped.children[0].children.size() == 1);
  CHECK(wrapped.children[1].is_leaf());

  LabelTable wrong_size(3);
  CHECK_THROWS_AS(assign_labels(two, wrong_size), std::invalid_argument);
  CHECK_THROWS_AS(
      assign_labels(parse_bracketed("(A (P a) (Q b) (R c))").front(),
                    one_hot_labels(example_binary())),
      std::invalid_argument);
}

TEST_CASE("missing label spans surface as errors") {
  Node skeleton = reconstruct_exact({0, 1, 2, 1, 0});
  LabelTable sparse(5);
  sparse.set({0, 5}, "S", 1.0);
  CHECK_THROWS_AS(assign_labels(skeleton, sparse), MissingSpanError);
}

TEST_CASE("loss on a one-word tree") {
  Tree tree = parse_bracketed("(NP (NN code))").front();
  ProbMatrix p(1);
  p.at(0, 1) = 0.5;
  LabelTable labels(1);
  labels.set({0, 1}, "NP", 1.0);
  CHECK(nll_loss(tree, p, labels) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("loss vanishes exactly on one-hot distributions") {
  Tree binary = example_binary();
  ProbMatrix p = one_hot_probabilities(linearize(binary));
  LabelTable labels = one_hot_labels(binary);
  CHECK(nll_loss(binary, p, labels) == 0.0);
  CHECK(nll_loss(binary, p, labels, false) == 0.0);
}

TEST_CASE("loss is infinite when a required cell is zero") {
  Tree binary = example_binary();
  ProbMatrix p = one_hot_probabilities(linearize(binary));
  LabelTable labels = one_hot_labels(binary);

  ProbMatrix broken = p;
  broken.at(1, 4) = 0.0;
  CHECK(nll_loss(binary, broken, labels) == kInf);

  // Empty-label spans only count when included.
  LabelTable no_empties(5);
  for (const auto& [span, dist] : labels.spans()) {
    for (const auto& [label, prob] : dist) {
      if (label != empty_label()) no_empties.set(span, label, prob);
    }
  }
  CHECK(nll_loss(binary, p, no_empties) == kInf);
  CHECK(nll_loss(binary, p, no_empties, false) == 0.0);

  CHECK_THROWS_AS(nll_loss(binary, ProbMatrix(3), LabelTable(3)),
                  std::invalid_argument);
}

TEST_CASE("loss averages over the sentence length") {
  // Structure factors 0.5 at j = 2 and j = 3: loss = 2 log 2 / 3.
  Tree tree = parse_bracketed("(S (NN a) (NN b) (NN c))").front();
  Tree binary = binarize(tree);
  REQUIRE(linearize(binary) == Linearization{0, 1, 0});
  ProbMatrix p(3);
  p.at(0, 1) = 1.0;
  p.at(0, 2) = 0.5;
  p.at(1, 2) = 0.5;
  p.at(0, 3) = 0.5;
  p.at(1, 3) = 0.25;
  p.at(2, 3) = 0.25;
  LabelTable labels = one_hot_labels(binary);
  CHECK(nll_loss(binary, p, labels) ==
        doctest::Approx(2.0 * std::log(2.0) / 3.0).epsilon(1e-12));
}

TEST_CASE("score files round trip") {
  std::mt19937_64 rng(22);
  std::vector<ScoreMatrix> matrices;
  matrices.push_back(random_scores(5, rng));
  matrices.push_back(random_scores(1, rng));
  matrices.push_back(random_scores(3, rng, -1e300, 1e300));
  matrices[0].at(2, 4) = 1.0 / 3.0;
  matrices[2].at(0, 1) = 5e-324;  // smallest subnormal

  std::string path = temp_path("spanlin_scores.txt");
  save_scores(path, matrices);
  std::vector<ScoreMatrix> loaded = load_scores(path);
  REQUIRE(loaded.size() == matrices.size());
  for (std::size_t m = 0; m < matrices.size(); ++m) {
    REQUIRE(loaded[m].size() == matrices[m].size());
    for (int j = 1; j <= matrices[m].size(); ++j) {
      for (int i = 0; i < j; ++i) {
        CHECK(loaded[m].at(i, j) == matrices[m].at(i, j));
      }
    }
  }
  std::filesystem::remove(path);
}

TEST_CASE("score files accept any cell order and CRLF") {
  std::istringstream in(
      "n=3\r\n3 2 0.25\n1 0 -1.5e-2\n\n2 0 4\n2 1 5\n3 0 6\n3 1 7\n");
  std::vector<ScoreMatrix> matrices = parse_scores(in);
  REQUIRE(matrices.size() == 1);
  CHECK(matrices[0].at(2, 3) == 0.25);
  CHECK(matrices[0].at(0, 1) == -0.015);
  CHECK(matrices[0].at(1, 2) == 5.0);
}

TEST_CASE("score file errors cite line numbers") {
  auto parse_text = [](const std::string& text) {
    std::istringstream in(text);
    return parse_scores(in);
  };
  CHECK_THROWS_WITH_AS(parse_text("x=3\n"),
                       "line 1, column 1: expected 'n=<int>' block header",
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_text("n=zero\n"),
                       "line 1, column 1: invalid sentence length 'zero'",
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_text("n=0\n"),
                       "line 1, column 1: invalid sentence length '0'",
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_text("n=2\n1 0 0.5\n"),
                       "line 2, column 1: missing cell (0, 2)", ParseError);
  CHECK_THROWS_WITH_AS(parse_text("n=2\n1 0 0.5\n2 0 0.5\nn=1\n1 0 1\n"),
                       "line 4, column 1: missing cell (1, 2)", ParseError);
  CHECK_THROWS_WITH_AS(
      parse_text("n=2\n1 0\n"),
      "line 2, column 1: malformed cell line (expected 'j i value')",
      ParseError);
  CHECK_THROWS_WITH_AS(
      parse_text("n=2\n1 0 abc\n"),
      "line 2, column 1: malformed cell line (expected 'j i value')",
      ParseError);
  CHECK_THROWS_WITH_AS(parse_text("n=2\n1 0 inf\n"),
                       "line 2, column 1: non-finite score", ParseError);
  CHECK_THROWS_WITH_AS(parse_text("n=2\n3 0 1.0\n"),
                       "line 2, column 1: cell index out of range: (0, 3)",
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_text("n=2\n1 0 0.5\n1 0 0.75\n"),
                       "line 3, column 1: duplicate cell (0, 1)", ParseError);
  CHECK_THROWS_AS(load_scores(temp_path("spanlin_missing_scores.txt")),
                  std::runtime_error);
}

TEST_CASE("label files round trip") {
  Tree binary = example_binary();
  std::vector<LabelTable> tables;
  tables.push_back(one_hot_labels(binary));
  LabelTable mixed(2);
  mixed.set({0, 1}, "NP", 0.25);
  mixed.set({0, 1}, empty_label(), 0.75);
  mixed.set({0, 2}, "S", 1.0);
  mixed.set({1, 2}, empty_label(), 1.0);
  tables.push_back(mixed);

  std::string path = temp_path("spanlin_labels.txt");
  save_labels(path, tables);
  std::vector<LabelTable> loaded = load_labels(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].size() == 5);
  CHECK(loaded[0].argmax({2, 4}) == "S+VP");
  CHECK(loaded[1].prob({0, 1}, "NP") == 0.25);
  CHECK(loaded[1].prob({0, 1}, empty_label()) == 0.75);

  // The reserved label travels in serialized form.
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("@EMPTY@") != std::string::npos);
  CHECK(text.find(empty_label()) == std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("label file errors cite line numbers") {
  auto parse_text = [](const std::string& text) {
    std::istringstream in(text);
    return parse_labels(in);
  };
  CHECK_THROWS_WITH_AS(parse_text("0 1 NP 1.0\n"),
                       "line 1, column 1: expected 'n=<int>' block header",
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_text("n=-3\n"),
                       "line 1, column 1: invalid sentence length '-3'",
                       ParseError);
  CHECK_THROWS_WITH_AS(
      parse_text("n=2\n0 1 NP\n"),
      "line 2, column 1: malformed label line (expected 'i j label prob')",
      ParseError);
  CHECK_THROWS_WITH_AS(parse_text("n=2\n0 3 NP 1.0\n"),
                       "line 2, column 1: label span out of range: (0, 3)",
                       ParseError);
  CHECK_THROWS_WITH_AS(
      parse_text("n=2\n0 1 NP 0.5\n0 1 NP 0.5\n"),
      "line 3, column 1: duplicate label entry for span (0, 1) and label "
      "'NP'",
      ParseError);
  CHECK_THROWS_AS(parse_text("n=2\n0 1 NP -0.25\n"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_text("n=2\n0 1 NP 0.5\n0 1 VP 0.25\n"),
      "line 1, column 1: distribution for span (0, 1) sums to 0.75",
      ParseError);
  // The sum check runs when the next block starts.
  CHECK_THROWS_WITH_AS(
      parse_text("n=2\n0 1 NP 0.5\nn=1\n0 1 S 1\n"),
      "line 1, column 1: distribution for span (0, 1) sums to 0.5",
      ParseError);
  // Distinct labels on one span may share probability mass.
  std::istringstream ok("n=2\n0 1 NP 0.5\n0 1 @EMPTY@ 0.5\n");
  std::vector<LabelTable> tables = parse_labels(ok);
  CHECK(tables[0].prob({0, 1}, empty_label()) == 0.5);
}

TEST_CASE("decode pipeline from scores to a labeled tree") {
  // End to end: decode, label, debinarize; every gold constituent returns.
  Tree gold = parse_bracketed(kExample).front();
  Tree binary = binarize(gold);
  ProbMatrix p = one_hot_probabilities(linearize(binary));
  LabelTable labels = one_hot_labels(binary);
  for (auto decode : {+[](const ProbMatrix& m) { return cky_decode(m); },
                      +[](const ProbMatrix& m) {
                        return reconstruct_exact(predict_linearization(m));
                      }}) {
    Node skeleton = decode(p);
    Tree predicted = debinarize(assign_labels(skeleton, labels));
    CHECK(extract_eval_spans(predicted) == extract_eval_spans(gold));
  }
}
