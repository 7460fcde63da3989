#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>

#include "doctest.h"
#include "spanlin/linearization.hpp"
#include "spanlin/random_trees.hpp"
#include "spanlin/treebank.hpp"

using namespace spanlin;

namespace {

const char* kExample =
    "(S (NP (PRP She)) (VP (VBZ loves) (S (VP (VBG writing) (NP (NN code)))))"
    " (. .))";

Tree example_binary() { return binarize(parse_bracketed(kExample).front()); }

// The definition itself: (d_j, j) is the longest tree span ending at j.
Linearization longest_span_ends(const Node& tree) {
  std::vector<SpanEntry> entries = preorder_spans(tree);
  int n = entries.front().end;
  Linearization d(n);
  for (int j = 1; j <= n; ++j) {
    int begin = j - 1;
    for (const SpanEntry& e : entries) {
      if (e.end == j) begin = std::min(begin, e.begin);
    }
    d[j - 1] = begin;
  }
  return d;
}

}  // namespace

TEST_CASE("linearization of the running example") {
  Tree binary = example_binary();
  CHECK(linearize(binary) == Linearization{0, 1, 2, 1, 0});
  CHECK(left_child_spans(binary) ==
        std::set<Span>{{0, 1}, {1, 2}, {2, 3}, {1, 4}, {0, 5}});
}

TEST_CASE("linearization of chains") {
  CHECK(linearize(right_chain_skeleton(4)) == Linearization{0, 1, 2, 0});
  CHECK(linearize(left_chain_skeleton(4)) == Linearization{0, 0, 0, 0});
  CHECK(linearize(right_chain_skeleton(1)) == Linearization{0});
  CHECK(linearize(right_chain_skeleton(2)) == Linearization{0, 0});
}

TEST_CASE("linearize requires a binary tree") {
  Tree flat = parse_bracketed("(A (P a) (Q b) (R c))").front();
  CHECK_THROWS_AS(linearize(flat), std::invalid_argument);
  CHECK_THROWS_AS(left_child_spans(flat), std::invalid_argument);
}

TEST_CASE("linearize matches the longest-span definition") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 1 + static_cast<int>(rng() % 30);
    Node tree = random_skeleton(n, rng);
    Linearization d = linearize(tree);
    CHECK(d == longest_span_ends(tree));
    CHECK(d.back() == 0);
    // Left-child spans plus the root span, as a set of pairs (d_j, j).
    std::set<Span> spans;
    for (int j = 1; j <= n; ++j) spans.insert({d[j - 1], j});
    CHECK(spans == left_child_spans(tree));
    CHECK(spans.size() == static_cast<std::size_t>(n));
  }
}

TEST_CASE("legality reports") {
  CHECK(is_legal({0}));
  CHECK(is_legal({0, 0}));
  CHECK(is_legal({0, 1, 2, 1, 0}));
  CHECK(is_legal({0, 0, 0, 0}));
  CHECK(is_legal({0, 1, 2, 0}));

  // A nonzero last entry means the root span never closes.
  CHECK_FALSE(is_legal({0, 1}));
  LegalityReport tail = check_legality({0, 0, 2});
  CHECK_FALSE(tail.legal);
  CHECK(tail.bound_violations.empty());
  CHECK(tail.crossing_pairs.empty());
  CHECK(tail.open_root);

  LegalityReport crossing = check_legality({0, 0, 1});
  CHECK_FALSE(crossing.legal);
  CHECK(crossing.crossing_pairs ==
        std::vector<std::pair<int, int>>{{2, 3}});
  CHECK(crossing.open_root);

  LegalityReport bounds = check_legality({0, 5, 0});
  CHECK(bounds.bound_violations == std::vector<int>{2});
  LegalityReport negative = check_legality({0, -1, 0});
  CHECK(negative.bound_violations == std::vector<int>{2});

  CHECK(describe(check_legality({0})) == "legal");
  CHECK(describe(crossing) ==
        "d_3 falls strictly inside (d_2, 2); last entry is nonzero");
  CHECK(describe(bounds) == "d_2 outside [0, 2)");

  CHECK_THROWS_AS(check_legality({}), std::invalid_argument);
}

TEST_CASE("every linearized tree is legal") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng() % 50);
    CHECK(is_legal(linearize(random_skeleton(n, rng))));
  }
}

TEST_CASE("reconstruction of the running example") {
  Node skeleton = reconstruct_exact({0, 1, 2, 1, 0});
  CHECK(binary_internal_spans(skeleton) ==
        std::set<Span>{{0, 5}, {1, 5}, {1, 4}, {2, 4}});
  // The skeleton drops preterminal wrappers, so compare split structure.
  CHECK(binary_internal_spans(skeleton) ==
        binary_internal_spans(example_binary()));
  CHECK(linearize(skeleton) == Linearization{0, 1, 2, 1, 0});
}

TEST_CASE("reconstruction rules on an illegal input") {
  // (0, 0, 1) is illegal, yet all three rules settle on ((w1 w2) w3).
  for (SplitRule rule :
       {SplitRule::exact, SplitRule::leq, SplitRule::argmin}) {
    Node tree = reconstruct({0, 0, 1}, rule);
    CHECK(binary_internal_spans(tree) == std::set<Span>{{0, 3}, {0, 2}});
  }
}

TEST_CASE("exact rule can run out of split points") {
  CHECK_THROWS_WITH_AS(reconstruct_exact({0, 0, 0, 2, 0}),
                       "no split point with d_k = 3 inside span (3, 5)",
                       LegalityError);
  // The relaxed rules always find a split under the per-entry bound.
  CHECK(leaf_count(reconstruct_leq({0, 0, 0, 2, 0})) == 5);
  CHECK(leaf_count(reconstruct_argmin({0, 0, 0, 2, 0})) == 5);
}

TEST_CASE("per-entry bound violations are rejected up front") {
  for (SplitRule rule :
       {SplitRule::exact, SplitRule::leq, SplitRule::argmin}) {
    CHECK_THROWS_WITH_AS(reconstruct({0, 5, 0}, rule),
                         "d_2 = 5 outside [0, 2)", LegalityError);
    CHECK_THROWS_WITH_AS(reconstruct({0, -1, 0}, rule),
                         "d_2 = -1 outside [0, 2)", LegalityError);
    CHECK_THROWS_AS(reconstruct({}, rule), std::invalid_argument);
  }
}

TEST_CASE("argmin ties pick the largest split point") {
  Node tree = reconstruct_argmin({0, 0, 0});
  CHECK(binary_internal_spans(tree) == std::set<Span>{{0, 3}, {0, 2}});
}

TEST_CASE("all rules invert linearize") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng() % 40);
    Node tree = random_skeleton(n, rng);
    Linearization d = linearize(tree);
    for (SplitRule rule :
         {SplitRule::exact, SplitRule::leq, SplitRule::argmin}) {
      CHECK(same_shape(reconstruct(d, rule), tree));
    }
  }
}

TEST_CASE("relaxed rules stay total under the per-entry bound") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 1 + static_cast<int>(rng() % 30);
    Linearization d = random_condition1(n, rng);
    for (SplitRule rule : {SplitRule::leq, SplitRule::argmin}) {
      Node tree = reconstruct(d, rule);
      CHECK(leaf_count(tree) == n);
      CHECK(is_binary_shape(tree));
      CHECK(is_legal(linearize(tree)));
    }
  }
}

TEST_CASE("split probe counts") {
  std::uint64_t work = 0;
  reconstruct_exact(linearize(right_chain_skeleton(8)), &work);
  CHECK(work == 28);  // 7 + 6 + ... + 1
  work = 0;
  reconstruct_exact(linearize(left_chain_skeleton(8)), &work);
  CHECK(work == 7);  // one probe per span
}

TEST_CASE("chains of ten thousand leaves") {
  const int n = 10000;
  Linearization right(n);
  for (int i = 2; i < n; ++i) right[i - 1] = i - 1;
  Node tree = reconstruct_exact(right);
  CHECK(leaf_count(tree) == n);
  CHECK(linearize(tree) == right);
  CHECK(same_shape(tree, right_chain_skeleton(n)));

  Linearization left(n, 0);
  Node flat = reconstruct_exact(left);
  CHECK(linearize(flat) == left);
  CHECK(same_shape(flat, left_chain_skeleton(n)));
}

TEST_CASE("skeleton builder validates splits") {
  CHECK_THROWS_AS(build_binary_skeleton(0, [](int, int) { return 0; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_binary_skeleton(3, [](int, int j) { return j; }),
                  std::logic_error);
  CHECK(leaf_count(build_binary_skeleton(1, [](int, int) { return 0; })) ==
        1);
}
