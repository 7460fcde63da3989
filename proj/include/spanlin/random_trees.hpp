#pragma once

#include <random>

#include "spanlin/decoder.hpp"
#include "spanlin/linearization.hpp"
#include "spanlin/tree.hpp"

namespace spanlin {

// Unlabeled binary skeleton with every split drawn uniformly; expected
// split-search cost when reconstructing is close to n log n.
Node random_skeleton(int n, std::mt19937_64& rng);

// ((w1 w2) w3) w4 ...: every split closes at the right edge, so rightmost
// split search finds it in one probe.
Node left_chain_skeleton(int n);

// w1 (w2 (w3 w4)): the degenerate shape whose rightmost split search scans
// the whole suffix, quadratic in total.
Node right_chain_skeleton(int n);

// Labeled n-ary constituent tree with unary wrappers and collapsed-arity
// nodes mixed in; words are w1..wn. Suitable input for preprocessing,
// binarization and evaluation round trips.
Tree random_const_tree(int n, std::mt19937_64& rng);

// d_i uniform over [0, i), nothing else enforced.
Linearization random_condition1(int n, std::mt19937_64& rng);

ScoreMatrix random_scores(int n, std::mt19937_64& rng, double low = -5.0,
                          double high = 5.0);

}  // namespace spanlin
