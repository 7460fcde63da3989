#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "spanlin/decoder.hpp"
#include "spanlin/linearization.hpp"
#include "spanlin/tree.hpp"

// Exhaustive reference implementations. Everything here enumerates all
// binary bracketings, so sentence lengths are capped hard.
namespace spanlin::oracle {

inline constexpr int kMaxLeaves = 12;
inline constexpr int kMaxSequenceLength = 9;

// Number of binary bracketings over m+1 leaves.
std::uint64_t catalan(int m);

// Visits every binary skeleton over n leaves exactly once.
void enumerate_trees(int n, const std::function<void(const Node&)>& visit);

std::uint64_t tree_count(int n);

// Every sequence d with 0 <= d_i < i, in lexicographic order.
void for_each_bounded_sequence(
    int n, const std::function<void(const Linearization&)>& visit);

// True iff some enumerated tree linearizes to d.
bool legality_by_enumeration(const Linearization& d);

// Maximizes the product of left-child span probabilities over all trees.
// Ties prefer the larger split point, decided top-down, so the result is
// comparable tree-for-tree with cky_decode. Returns the tree and its
// probability.
std::pair<Node, double> best_tree_bruteforce(const ProbMatrix& p);

}  // namespace spanlin::oracle
