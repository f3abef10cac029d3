#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "freezetree/rational.hpp"
#include "freezetree/rng.hpp"
#include "freezetree/sequence.hpp"
#include "freezetree/tree.hpp"

namespace freezetree {

// Thrown when an exhaustive expansion would exceed its state-space cap.
class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::int64_t kDefaultEnumerationCap = 1'000'000;

// Forward construction. On x_i = -1 a uniform active vertex freezes with
// label i; on x_i = +1 a new active vertex is attached to a uniform active
// vertex by an edge labelled i. Once every vertex is frozen the tree stops
// evolving, so the result has min(n, tau) steps recorded in `n`.
//
// Vertex ids follow creation order, which means parents precede children.
FreezeTree build_attach(const SignSequence& x, Count n, Rng& rng);

// Product over i = 1..n of 1/S_{i-1}: the probability of every attainable
// tree after n steps. Requires S_i > 0 for i < n.
Rational tree_probability(const SignSequence& x, Count n);

// Product over i = 1..n of S_{i-1}: the number of attainable trees.
BigInt attainable_count(const SignSequence& x, Count n);

// Whether t is one of the trees the forward construction can produce from
// the first n signs of x (or the first tau signs if the walk dies earlier).
bool is_attainable(const FreezeTree& t, const SignSequence& x, Count n);

struct EnumeratedTree {
  std::string key;  // canonical_form
  Rational probability;
};

// Calls `visit` once per branch of the forward construction. The tree
// passed to the callback is only valid during the call.
void for_each_attach_outcome(const SignSequence& x, Count n,
                             const std::function<void(const FreezeTree&)>& visit,
                             std::int64_t cap = kDefaultEnumerationCap);

// Every attainable tree with its exact probability, sorted by key.
std::vector<EnumeratedTree> enumerate_trees(const SignSequence& x, Count n,
                                            std::int64_t cap = kDefaultEnumerationCap);

}  // namespace freezetree
